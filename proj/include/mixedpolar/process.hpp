/*
The stochastic channel tree process of the mixed construction and the
empirical checks behind its polarization statements: martingale
conservation, polarization mass, rate-of-polarization masses, the Z
recursion sandwich, and the law-of-large-numbers tail behavior of the
partial-distance sequence.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <cmath>
#include <vector>

#include "mixedpolar/erasure_de.hpp"
#include "mixedpolar/rng.hpp"
#include "mixedpolar/xfloat.hpp"

namespace mixedpolar {

/// Proposition 3 proof constants.
struct BoundConstants {
    static constexpr double c1 = 64.0;          // 4^3
    static constexpr double c2 = 1.0 / 4096.0;  // 4^-6
};

struct ProcessState {
    std::size_t width = 1;  // N_n
    double i_n = 0.0;       // I(W_n) / N_n
    double z_n = 0.0;       // Z(W_n)
};

struct ProcessStep {
    std::size_t branch = 0;     // child index within the kernel at this step
    std::size_t width_before = 1;
    std::size_t d_hat = 1;      // D_min of the branch taken
    std::size_t d_check = 1;    // D_max of the branch taken
};

struct ProcessPath {
    std::vector<ProcessState> states;  // n = 0..n_max
    std::vector<ProcessStep> steps;    // n = 0..n_max-1
    std::ptrdiff_t t_glue = -1;        // T; -1 when no glued branch within n_max
};

namespace detail {

inline const PartialDistances& g1_distances() {
    static const PartialDistances pd = partial_distances(g1_kernel());
    return pd;
}
inline const PartialDistances& g2_distances() {
    static const PartialDistances pd = partial_distances(g2_rs4_kernel());
    return pd;
}

/// Branch choice with probability width_i / L (1/4, 1/2, 1/4 for g1 and
/// uniform for g2).
inline std::size_t sample_branch(const Kernel& k, Philox& rng) {
    const double u = rng.uniform() * static_cast<double>(k.total_bits());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < k.num_input_groups(); ++i) {
        acc += static_cast<double>(k.input_width(i));
        if (u < acc) return i;
    }
    return k.num_input_groups() - 1;
}

/// Subgroup-state DE in extended-range arithmetic; needed where Z values
/// drop below the double exponent range (deep levels, small thresholds).
struct XState {
    std::size_t width = 1;
    std::array<XDouble, 5> p{};
};

inline XState x_base_state(double eps, std::size_t width) {
    SubgroupDist s = bec_base_state(eps, width);
    XState x;
    x.width = width;
    for (std::size_t i = 0; i < s.num_states(); ++i) x.p[i] = XDouble::from(s.p[i]);
    return x;
}

inline XState x_split(const Kernel& k, const XState& parent, std::size_t group) {
    const auto& t = de_tables(k);
    XState child;
    child.width = t.child_width[group];
    const auto& idx = t.child_index[group];
    const std::size_t s = t.parent_states;
    for (std::size_t combo = 0; combo < t.combos; ++combo) {
        XDouble prob = XDouble::from(1.0);
        std::size_t rest = combo;
        for (std::size_t j = 0; j < t.arity; ++j) {
            prob = prob * parent.p[rest % s];
            rest /= s;
        }
        child.p[idx[combo]] += prob;
    }
    return child;
}

struct LogZ {
    double z = 0.0;      // log2 of the average Bhattacharyya parameter
    double z_max = 0.0;  // log2 of the largest pairwise value
    double z_min = 0.0;  // log2 of the smallest pairwise value
};

inline LogZ x_state_log_z(const XState& s) {
    const auto& subs = canonical_subgroups(s.width);
    const std::size_t q = std::size_t{1} << s.width;
    std::array<XDouble, 4> z_delta{};
    for (std::size_t i = 0; i < (s.width == 1 ? 2u : 5u); ++i) {
        const std::uint32_t mask = subs[i].element_mask();
        for (std::size_t d = 1; d < q; ++d)
            if ((mask >> d) & 1u) z_delta[d] += s.p[i];
    }
    XDouble avg, zmax = z_delta[1], zmin = z_delta[1];
    for (std::size_t d = 1; d < q; ++d) {
        avg += z_delta[d];
        if (zmax < z_delta[d]) zmax = z_delta[d];
        if (z_delta[d] < zmin) zmin = z_delta[d];
    }
    return {avg.div_by(static_cast<double>(q - 1)).log2(), zmax.log2(), zmin.log2()};
}

/// All tree levels of the mixed construction in extended-range arithmetic.
inline std::vector<std::vector<XState>> x_evolve_tree(const Layout& lay, double eps) {
    std::vector<std::vector<XState>> levels(lay.depth() + 1);
    levels[0] = {x_base_state(eps, lay.base_width)};
    for (std::size_t k = 1; k <= lay.depth(); ++k) {
        for (const auto& node : levels[k - 1]) {
            const Kernel& kern = lay.kernel_for(k, node.width);
            for (std::size_t i = 0; i < kern.num_input_groups(); ++i)
                levels[k].push_back(x_split(kern, node, i));
        }
    }
    return levels;
}

}  // namespace detail

/// One trajectory of the channel tree process. Channel quantities are exact
/// (density evolution states); only the branch choices are random.
inline ProcessPath sample_path(double eps, std::size_t n_max, std::uint64_t seed,
                               std::uint64_t stream = 0) {
    if (n_max < 1) throw std::invalid_argument("sample_path: n_max must be >= 1");
    Philox rng(seed, stream);
    ProcessPath path;
    SubgroupDist state = bec_base_state(eps, 1);
    auto record = [&](const SubgroupDist& s) {
        auto m = state_metrics(s);
        path.states.push_back({s.width, m.capacity / static_cast<double>(s.width), m.z});
    };
    record(state);
    for (std::size_t n = 0; n < n_max; ++n) {
        const bool glued = state.width == 2;
        const Kernel& k = glued ? g2_rs4_kernel() : g1_kernel();
        const auto& pd = glued ? detail::g2_distances() : detail::g1_distances();
        const std::size_t branch = detail::sample_branch(k, rng);
        if (!glued && k.input_width(branch) == 2 && path.t_glue < 0)
            path.t_glue = static_cast<std::ptrdiff_t>(n);
        path.steps.push_back({branch, state.width, pd.d_min[branch], pd.d_max[branch]});
        state = de_split(k, state, branch);
        record(state);
    }
    return path;
}

/// Maximum deviation of the branch-probability-weighted child mean of
/// I/width from the parent's I/width over the exact mixed DE tree.
inline double martingale_check(double eps, int n) {
    Layout lay = build_layout(Scheme::mixed, n);
    DeTree tree = de_evolve_tree(lay, eps);
    double worst = 0.0;
    for (std::size_t k = 1; k <= lay.depth(); ++k) {
        std::size_t child = 0;
        for (std::size_t node = 0; node < tree.levels[k - 1].size(); ++node) {
            const SubgroupDist& parent = tree.levels[k - 1][node];
            const Kernel& kern = lay.kernel_for(k, parent.width);
            const double l_bits = static_cast<double>(kern.total_bits());
            double mean = 0.0;
            for (std::size_t i = 0; i < kern.num_input_groups(); ++i, ++child) {
                const auto m = state_metrics(tree.levels[k][child]);
                mean += (static_cast<double>(kern.input_width(i)) / l_bits) *
                        (m.capacity / static_cast<double>(kern.input_width(i)));
            }
            const auto pm = state_metrics(parent);
            worst = std::max(worst, std::abs(mean - pm.capacity / static_cast<double>(parent.width)));
        }
    }
    return worst;
}

/// Weighted probability that I_n lies in the open interval (delta, 1-delta),
/// each channel counting width bits out of 4^n.
inline double polarization_fraction(double eps, int n, double delta) {
    DeResult de = de_evolve(build_layout(Scheme::mixed, n), eps);
    double mass = 0.0;
    for (const auto& c : de.channels) {
        const double i_n = c.metrics.capacity / static_cast<double>(c.width);
        if (i_n > delta && i_n < 1.0 - delta) mass += static_cast<double>(c.width);
    }
    return mass / static_cast<double>(de.n_bits);
}

struct RateMass {
    double mass_le = 0.0;  // weighted P(Z_n <= 2^(-4^(beta n)))
    double mass_ge = 0.0;  // weighted P(Z_n >= 2^(-4^(beta n)))
    double capacity = 0.0; // I(W) = 1 - eps, the Proposition-4 limit
};

/// Masses are compared in log2 domain with extended-range density
/// evolution, so thresholds far below the double exponent range (4^(beta n)
/// beyond ~1074) still classify exactly.
inline RateMass rate_of_polarization_check(double eps, int n, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("rate_of_polarization_check: beta in (0,1)");
    Layout lay = build_layout(Scheme::mixed, n);
    auto levels = detail::x_evolve_tree(lay, eps);
    const double exponent = std::pow(4.0, beta * static_cast<double>(n));
    RateMass r;
    r.capacity = 1.0 - eps;
    for (const auto& st : levels.back()) {
        const double log2z = detail::x_state_log_z(st).z;
        const double w = static_cast<double>(st.width);
        if (log2z <= -exponent) r.mass_le += w;
        if (log2z >= -exponent) r.mass_ge += w;
    }
    r.mass_le /= static_cast<double>(lay.n_bits);
    r.mass_ge /= static_cast<double>(lay.n_bits);
    return r;
}

struct SllnReport {
    double mean = 0.0;    // mean over paths of the per-path time average
    double stddev = 0.0;  // dispersion of the time averages
    std::vector<std::size_t> histogram;  // 40 bins over [0, 1]
    double bin_width = 1.0 / 40.0;
};

/// Time averages of log4(D_hat) along the process law: before T the values
/// log4{1,2,4} arrive with probabilities (1/4,1/2,1/4); from the glued step
/// on, log4 of g2's minimum partial distances arrive uniformly.
inline SllnReport slln_tail_check(std::size_t n_steps, std::size_t paths, std::uint64_t seed,
                                  bool force_pre_t = false) {
    if (n_steps < 1 || paths < 1) throw std::invalid_argument("slln_tail_check: empty experiment");
    const auto& pd1 = detail::g1_distances();
    const auto& pd2 = detail::g2_distances();
    SllnReport rep;
    rep.histogram.assign(40, 0);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
        Philox rng(seed, p);
        bool glued = false;
        double acc = 0.0;
        for (std::size_t i = 0; i < n_steps; ++i) {
            std::size_t d;
            if (glued) {
                d = pd2.d_min[rng.below(4)];
            } else {
                const std::size_t branch = detail::sample_branch(g1_kernel(), rng);
                d = pd1.d_min[branch];
                if (branch == 1 && !force_pre_t) glued = true;
            }
            acc += std::log2(static_cast<double>(d)) / 2.0;  // log4
        }
        const double avg = acc / static_cast<double>(n_steps);
        sum += avg;
        sum_sq += avg * avg;
        auto bin = static_cast<std::size_t>(avg / rep.bin_width);
        rep.histogram[std::min(bin, rep.histogram.size() - 1)] += 1;
    }
    rep.mean = sum / static_cast<double>(paths);
    rep.stddev = std::sqrt(std::max(0.0, sum_sq / static_cast<double>(paths) - rep.mean * rep.mean));
    return rep;
}

/// Checks Z_max(child) <= c1 * Z_max(parent)^D_hat and
/// Z_min(child) >= c2 * Z_min(parent)^D_check on every edge of the exact
/// mixed DE tree, in the log2 domain so deep levels stay in range. Returns
/// the number of violations (expected zero).
inline std::size_t z_bound_check(double eps, int n) {
    Layout lay = build_layout(Scheme::mixed, n);
    auto levels = detail::x_evolve_tree(lay, eps);
    std::size_t violations = 0;
    constexpr double slack = 1e-9;  // log2-domain rounding allowance
    const double log2_c1 = std::log2(BoundConstants::c1);
    const double log2_c2 = std::log2(BoundConstants::c2);
    for (std::size_t k = 1; k <= lay.depth(); ++k) {
        std::size_t child = 0;
        for (std::size_t node = 0; node < levels[k - 1].size(); ++node) {
            const auto& parent = levels[k - 1][node];
            const Kernel& kern = lay.kernel_for(k, parent.width);
            const auto& pd = parent.width == 1 ? detail::g1_distances() : detail::g2_distances();
            const auto pz = detail::x_state_log_z(parent);
            for (std::size_t i = 0; i < kern.num_input_groups(); ++i, ++child) {
                const auto cz = detail::x_state_log_z(levels[k][child]);
                // infinities behave correctly: a zero parent Z forces a zero
                // child on the upper side and a vacuous lower bound
                const double upper = log2_c1 + static_cast<double>(pd.d_min[i]) * pz.z_max;
                const double lower = log2_c2 + static_cast<double>(pd.d_max[i]) * pz.z_min;
                if (cz.z_max > upper + slack) ++violations;
                if (cz.z_min < lower - slack) ++violations;
            }
        }
    }
    return violations;
}

}  // namespace mixedpolar
