/*
Command-line front end: reproducible experiments emitting CSV or JSON.
All randomness funnels through --seed; identical configurations produce
byte-identical output (the one exception is simulate's elapsed_seconds
timing column).

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixedpolar/code_design.hpp"
#include "mixedpolar/process.hpp"
#include "mixedpolar/sc.hpp"

namespace mixedpolar {

struct RunConfig {
    std::string subcommand;
    std::string scheme = "mixed";  // mixed | arikan | rs4_top | all (curve only)
    int n = 2;
    double epsilon = 0.5;
    std::vector<double> rates;   // grid for curve, single value for select/simulate
    long long k_bits = -1;       // explicit K; wins over --rate
    double delta = 0.1;
    std::vector<double> betas = {0.4, 0.8};
    std::size_t steps = 200;     // slln time horizon
    std::size_t trials = 1000;   // Monte-Carlo trials / sampled paths
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string check = "all";   // process subcommand
    std::string out;             // empty = stdout
    std::string format;          // csv | json; default depends on subcommand
};

namespace cli_detail {

inline std::string num(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

inline std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += '|';
        s += std::to_string(v[i]);
    }
    return s;
}

inline std::vector<double> default_rate_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 14; ++i) g.push_back(0.05 * i);
    return g;
}

inline std::size_t resolve_k(const RunConfig& cfg, std::size_t n_bits) {
    if (cfg.k_bits >= 0) return static_cast<std::size_t>(cfg.k_bits);
    if (cfg.rates.size() == 1)
        return static_cast<std::size_t>(std::llround(cfg.rates[0] * static_cast<double>(n_bits)));
    throw std::invalid_argument("provide --K or a single --rate");
}

struct KernelRow {
    const Kernel* kernel;
    PartialDistances pd;
    ExponentBounds eb;
};

inline std::vector<KernelRow> kernel_rows() {
    std::vector<KernelRow> rows;
    for (const Kernel* k :
         {&g1_kernel(), &g2_rs4_kernel(), &arikan_kernel(), &quaternary_arikan_kernel()}) {
        PartialDistances pd = partial_distances(*k);
        rows.push_back({k, pd, exponent_bounds(*k, pd)});
    }
    return rows;
}

inline void run_kernels(const RunConfig& cfg, std::ostream& os) {
    auto rows = kernel_rows();
    ExponentBounds mixed = mixed_exponent_bounds({rows[1].eb});  // auxiliary set = {g2}
    if (cfg.format == "json") {
        nlohmann::json j;
        j["kernels"] = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json jk = r.kernel->to_json();
            jk["d_min"] = r.pd.d_min;
            jk["d_max"] = r.pd.d_max;
            jk["E1"] = r.eb.e1;
            jk["E2"] = r.eb.e2;
            j["kernels"].push_back(jk);
        }
        j["mixed_g1_g2"] = {{"E1", mixed.e1}, {"E2", mixed.e2}};
        os << j.dump(2) << "\n";
        return;
    }
    os << "# kernel metrics: partial distances per input group (symbol-level), "
          "exponents are base-ell log averages; mixed bounds take min/max over auxiliary kernels\n";
    os << "name,L,ell,input_widths,d_min,d_max,E1,E2\n";
    for (const auto& r : rows) {
        os << r.kernel->name() << ',' << r.kernel->total_bits() << ',' << r.kernel->arity() << ','
           << join_sizes(r.kernel->input_widths()) << ',' << join_sizes(r.pd.d_min) << ','
           << join_sizes(r.pd.d_max) << ',' << num(r.eb.e1) << ',' << num(r.eb.e2) << "\n";
    }
    os << "mixed_g1_g2,,,,,," << num(mixed.e1) << ',' << num(mixed.e2) << "\n";
}

inline void run_layout(const RunConfig& cfg, std::ostream& os) {
    if (!cfg.format.empty() && cfg.format != "json")
        throw std::invalid_argument("layout output is JSON only");
    Layout lay = build_layout(scheme_from_string(cfg.scheme), cfg.n);
    os << layout_to_json(lay).dump(2) << "\n";
}

inline void run_de(const RunConfig& cfg, std::ostream& os) {
    DeResult de = de_evolve(build_layout(scheme_from_string(cfg.scheme), cfg.n), cfg.epsilon);
    if (cfg.format == "json") {
        nlohmann::json j;
        j["scheme"] = cfg.scheme;
        j["n"] = cfg.n;
        j["N"] = de.n_bits;
        j["epsilon"] = de.epsilon;
        j["channels"] = nlohmann::json::array();
        for (const auto& c : de.channels) {
            nlohmann::json jc;
            jc["start"] = c.start;
            jc["width"] = c.width;
            jc["I"] = c.metrics.capacity;
            jc["Z"] = c.metrics.z;
            jc["pe_ambiguous"] = c.metrics.pe_ambiguous;
            jc["pe_guess"] = c.metrics.pe_guess;
            std::vector<double> probs(c.state.p.begin(), c.state.p.begin() + c.state.num_states());
            jc["subgroup_probs"] = probs;
            j["channels"].push_back(jc);
        }
        os << j.dump(2) << "\n";
        return;
    }
    os << "# exact erasure DE: scheme=" << cfg.scheme << " n=" << cfg.n << " N=" << de.n_bits
       << " epsilon=" << num(de.epsilon)
       << "; I in bits, Z average Bhattacharyya, subgroup masses in canonical order"
          " (width-1 channels use p_trivial/p_full)\n";
    os << "channel_start_index,width,I,Z,P_e_ambiguous,P_e_guess,"
          "p_trivial,p_span01,p_span10,p_span11,p_full\n";
    for (const auto& c : de.channels) {
        os << c.start << ',' << c.width << ',' << num(c.metrics.capacity) << ',' << num(c.metrics.z)
           << ',' << num(c.metrics.pe_ambiguous) << ',' << num(c.metrics.pe_guess);
        if (c.width == 1)
            os << ',' << num(c.state.p[0]) << ",0,0,0," << num(c.state.p[1]);
        else
            for (std::size_t i = 0; i < 5; ++i) os << ',' << num(c.state.p[i]);
        os << "\n";
    }
}

inline void run_curve(const RunConfig& cfg, std::ostream& os) {
    std::vector<double> grid = cfg.rates.empty() ? default_rate_grid() : cfg.rates;
    std::vector<std::string> schemes = cfg.scheme == "all"
                                           ? std::vector<std::string>{"mixed", "arikan", "rs4_top"}
                                           : std::vector<std::string>{cfg.scheme};
    nlohmann::json jrows = nlohmann::json::array();
    if (cfg.format != "json") {
        os << "# union bound on SC block error vs rate; K is the achieved information size in bits\n";
        os << "scheme,N,epsilon,rate,K,bound\n";
    }
    for (const auto& s : schemes) {
        DeResult de = de_evolve(build_layout(scheme_from_string(s), cfg.n), cfg.epsilon);
        for (const auto& p : rate_curve(de, grid)) {
            if (!p.exact)
                std::cerr << "warning: K=" << p.k_target << " unreachable for " << s
                          << ", using K=" << p.k_achieved << "\n";
            if (cfg.format == "json") {
                jrows.push_back({{"scheme", s},
                                 {"N", de.n_bits},
                                 {"epsilon", cfg.epsilon},
                                 {"rate", p.rate},
                                 {"K", p.k_achieved},
                                 {"bound", p.bound}});
            } else {
                os << s << ',' << de.n_bits << ',' << num(cfg.epsilon) << ',' << num(p.rate) << ','
                   << p.k_achieved << ',' << num(p.bound) << "\n";
            }
        }
    }
    if (cfg.format == "json") os << jrows.dump(2) << "\n";
}

inline void run_select(const RunConfig& cfg, std::ostream& os) {
    Layout lay = build_layout(scheme_from_string(cfg.scheme), cfg.n);
    DeResult de = de_evolve(lay, cfg.epsilon);
    const std::size_t k = resolve_k(cfg, de.n_bits);
    InformationSet info = select_information_set(de, k);
    if (!info.exact)
        std::cerr << "warning: K=" << k << " unreachable, using K=" << info.k_achieved << "\n";
    if (cfg.format == "json") {
        nlohmann::json j;
        j["scheme"] = cfg.scheme;
        j["N"] = de.n_bits;
        j["epsilon"] = cfg.epsilon;
        j["K_target"] = k;
        j["K_achieved"] = info.k_achieved;
        j["bound"] = block_error_bound(de, info);
        j["channels"] = nlohmann::json::array();
        for (std::size_t i = 0; i < de.channels.size(); ++i)
            j["channels"].push_back({{"start", de.channels[i].start},
                                     {"width", de.channels[i].width},
                                     {"p_e", de.channels[i].metrics.pe_ambiguous},
                                     {"selected", static_cast<bool>(info.selected[i])}});
        os << j.dump(2) << "\n";
        return;
    }
    os << "# information set: scheme=" << cfg.scheme << " N=" << de.n_bits << " epsilon="
       << num(cfg.epsilon) << " K_target=" << k << " K_achieved=" << info.k_achieved
       << " union_bound=" << num(block_error_bound(de, info)) << "\n";
    os << "channel_start_index,width,p_e,selected\n";
    for (std::size_t i = 0; i < de.channels.size(); ++i)
        os << de.channels[i].start << ',' << de.channels[i].width << ','
           << num(de.channels[i].metrics.pe_ambiguous) << ',' << static_cast<int>(info.selected[i])
           << "\n";
}

inline void run_simulate(const RunConfig& cfg, std::ostream& os) {
    Layout lay = build_layout(scheme_from_string(cfg.scheme), cfg.n);
    DeResult de = de_evolve(lay, cfg.epsilon);
    const std::size_t k = resolve_k(cfg, de.n_bits);
    InformationSet info = select_information_set(de, k);
    if (!info.exact)
        std::cerr << "warning: K=" << k << " unreachable, using K=" << info.k_achieved << "\n";
    const auto t0 = std::chrono::steady_clock::now();
    BlerEstimate est = simulate_bler(lay, info, cfg.epsilon, cfg.trials, cfg.seed, cfg.threads);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cfg.format == "json") {
        nlohmann::json j = {{"scheme", cfg.scheme}, {"N", de.n_bits},
                            {"K", info.k_achieved}, {"epsilon", cfg.epsilon},
                            {"trials", est.trials}, {"seed", cfg.seed},
                            {"bler", est.bler},     {"stderr", est.stderr_},
                            {"elapsed_seconds", elapsed}};
        os << j.dump(2) << "\n";
        return;
    }
    os << "# Monte-Carlo SC block error rate (a block fails when any selected channel is "
          "ambiguous); stderr is the binomial standard error\n";
    os << "scheme,N,K,epsilon,trials,seed,bler,stderr,elapsed_seconds\n";
    os << cfg.scheme << ',' << de.n_bits << ',' << info.k_achieved << ',' << num(cfg.epsilon) << ','
       << est.trials << ',' << cfg.seed << ',' << num(est.bler) << ',' << num(est.stderr_) << ','
       << num(elapsed) << "\n";
}

inline void run_process(const RunConfig& cfg, std::ostream& os) {
    const bool all = cfg.check == "all";
    nlohmann::json j;
    const bool json = cfg.format == "json";
    if (cfg.check == "martingale" || all) {
        double dev = martingale_check(cfg.epsilon, cfg.n);
        if (json) {
            j["martingale"] = {{"n", cfg.n}, {"epsilon", cfg.epsilon}, {"max_deviation", dev}};
        } else {
            os << "# martingale: branch-weighted child mean of I/width vs parent, exact DE tree\n";
            os << "check,n,epsilon,max_deviation\n";
            os << "martingale," << cfg.n << ',' << num(cfg.epsilon) << ',' << num(dev) << "\n";
        }
    }
    if (cfg.check == "polarization" || all) {
        if (!json) {
            os << "# polarization: weighted mass of I_n in (delta, 1-delta)\n";
            os << "check,n,epsilon,delta,mass\n";
        } else {
            j["polarization"] = nlohmann::json::array();
        }
        for (int nn = 1; nn <= cfg.n; ++nn) {
            double mass = polarization_fraction(cfg.epsilon, nn, cfg.delta);
            if (json)
                j["polarization"].push_back({{"n", nn}, {"epsilon", cfg.epsilon},
                                             {"delta", cfg.delta}, {"mass", mass}});
            else
                os << "polarization," << nn << ',' << num(cfg.epsilon) << ',' << num(cfg.delta)
                   << ',' << num(mass) << "\n";
        }
    }
    if (cfg.check == "rate" || all) {
        if (!json) {
            os << "# rate of polarization: weighted mass with Z_n below/above 2^(-4^(beta n))\n";
            os << "check,beta,n,epsilon,mass_below_threshold,mass_above_threshold,capacity\n";
        } else {
            j["rate"] = nlohmann::json::array();
        }
        for (double beta : cfg.betas) {
            for (int nn = 1; nn <= cfg.n; ++nn) {
                RateMass r = rate_of_polarization_check(cfg.epsilon, nn, beta);
                if (json)
                    j["rate"].push_back({{"beta", beta}, {"n", nn}, {"epsilon", cfg.epsilon},
                                         {"mass_below_threshold", r.mass_le},
                                         {"mass_above_threshold", r.mass_ge},
                                         {"capacity", r.capacity}});
                else
                    os << "rate," << num(beta) << ',' << nn << ',' << num(cfg.epsilon) << ','
                       << num(r.mass_le) << ',' << num(r.mass_ge) << ',' << num(r.capacity) << "\n";
            }
        }
    }
    if (cfg.check == "slln" || all) {
        SllnReport rep = slln_tail_check(cfg.steps, cfg.trials, cfg.seed);
        if (json) {
            j["slln"] = {{"steps", cfg.steps}, {"paths", cfg.trials}, {"seed", cfg.seed},
                         {"mean", rep.mean},   {"stddev", rep.stddev},
                         {"histogram", rep.histogram}, {"bin_width", rep.bin_width}};
        } else {
            os << "# slln: time averages of log4(D_hat) along the process law\n";
            os << "check,steps,paths,seed,mean,stddev\n";
            os << "slln," << cfg.steps << ',' << cfg.trials << ',' << cfg.seed << ','
               << num(rep.mean) << ',' << num(rep.stddev) << "\n";
            os << "check,bin_lo,bin_hi,count\n";
            for (std::size_t b = 0; b < rep.histogram.size(); ++b)
                os << "slln_hist," << num(static_cast<double>(b) * rep.bin_width) << ','
                   << num(static_cast<double>(b + 1) * rep.bin_width) << ',' << rep.histogram[b]
                   << "\n";
        }
    }
    if (cfg.check == "zbound" || all) {
        std::size_t v = z_bound_check(cfg.epsilon, cfg.n);
        if (json) {
            j["zbound"] = {{"n", cfg.n}, {"epsilon", cfg.epsilon}, {"violations", v}};
        } else {
            os << "# zbound: Z recursion sandwich with c1=4^3, c2=4^-6 on every DE tree edge\n";
            os << "check,n,epsilon,violations\n";
            os << "zbound," << cfg.n << ',' << num(cfg.epsilon) << ',' << v << "\n";
        }
    }
    if (json) os << j.dump(2) << "\n";
}

}  // namespace cli_detail

/// Execute one subcommand; throws on invalid configurations.
inline void run(const RunConfig& cfg) {
    std::ofstream file;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) throw std::runtime_error("cannot open output file: " + cfg.out);
    }
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    if (cfg.subcommand == "kernels") return cli_detail::run_kernels(cfg, os);
    if (cfg.subcommand == "layout") return cli_detail::run_layout(cfg, os);
    if (cfg.subcommand == "de") return cli_detail::run_de(cfg, os);
    if (cfg.subcommand == "curve") return cli_detail::run_curve(cfg, os);
    if (cfg.subcommand == "select") return cli_detail::run_select(cfg, os);
    if (cfg.subcommand == "simulate") return cli_detail::run_simulate(cfg, os);
    if (cfg.subcommand == "process") return cli_detail::run_process(cfg, os);
    throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
}

/// Parse argv and run. Exit codes: 0 success, 2 usage error, 3 capacity cap.
inline int run_main(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"mixed-kernel polar code toolkit"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool with_scheme = true) {
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        if (with_scheme) sub->add_option("--n", cfg.n, "block length exponent, N = 4^n")
            ->check(CLI::Range(1, 16));
    };
    auto add_scheme = [&](CLI::App* sub, bool allow_all) {
        std::vector<std::string> names = {"mixed", "arikan", "rs4_top"};
        if (allow_all) names.push_back("all");
        sub->add_option("--scheme", cfg.scheme, "construction scheme")->check(CLI::IsMember(names));
    };
    auto add_eps = [&](CLI::App* sub) {
        sub->add_option("--epsilon", cfg.epsilon, "BEC erasure probability")
            ->check(CLI::Range(0.0, 1.0));
    };

    CLI::App* kernels = app.add_subcommand("kernels", "partial distances and exponent table");
    add_common(kernels, false);

    CLI::App* layout = app.add_subcommand("layout", "construction layout as JSON");
    add_scheme(layout, false);
    add_common(layout);

    CLI::App* de = app.add_subcommand("de", "exact erasure density evolution profile");
    add_scheme(de, false);
    add_eps(de);
    add_common(de);

    CLI::App* curve = app.add_subcommand("curve", "union-bound block error vs rate");
    add_scheme(curve, true);
    add_eps(curve);
    curve->add_option("--rate", cfg.rates, "rate grid (default 0.05..0.70)");
    add_common(curve);

    CLI::App* select = app.add_subcommand("select", "information set for a target size");
    add_scheme(select, false);
    add_eps(select);
    select->add_option("--K", cfg.k_bits, "information size in bits");
    select->add_option("--rate", cfg.rates, "target rate (alternative to --K)");
    add_common(select);

    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo SC block error rate");
    add_scheme(simulate, false);
    add_eps(simulate);
    simulate->add_option("--K", cfg.k_bits, "information size in bits");
    simulate->add_option("--rate", cfg.rates, "target rate (alternative to --K)");
    simulate->add_option("--trials", cfg.trials, "Monte-Carlo trials")->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    simulate->add_option("--seed", cfg.seed, "master seed");
    simulate->add_option("--threads", cfg.threads, "worker threads (results do not depend on this)");
    add_common(simulate);

    CLI::App* process = app.add_subcommand("process", "tree-process checks and reports");
    process->add_option("--check", cfg.check, "martingale|polarization|rate|slln|zbound|all")
        ->check(CLI::IsMember({"martingale", "polarization", "rate", "slln", "zbound", "all"}));
    add_eps(process);
    process->add_option("--delta", cfg.delta, "polarization interval margin")
        ->check(CLI::Range(0.0, 0.5));
    process->add_option("--beta", cfg.betas, "rate-of-polarization exponents");
    process->add_option("--steps", cfg.steps, "slln time horizon");
    process->add_option("--trials", cfg.trials, "slln sampled paths");
    process->add_option("--seed", cfg.seed, "master seed");
    add_common(process);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    try {
        run(cfg);
        return 0;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mixedpolar
