// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixedpolar/dmc.hpp"
#include "mixedpolar/erasure_de.hpp"

using namespace mixedpolar;

namespace {

// The DMC oracle rebuilds the synthesized channels by brute-force splitting
// and merging; density evolution must agree with it to near machine
// precision.
std::vector<Dmc> oracle_level1(double eps) {
    std::vector<Dmc> out;
    for (std::size_t i = 0; i < 3; ++i)
        out.push_back(merge_equivalent_outputs(split_channel(g1_kernel(), make_bec(eps), i)));
    return out;
}

}  // namespace

TEST_CASE("bec_base_state") {
    auto s0 = bec_base_state(0.0, 1);
    CHECK(s0.p[0] == 1.0);
    auto s1 = bec_base_state(1.0, 2);
    CHECK(s1.p[4] == 1.0);

    auto s = bec_base_state(0.5, 2);
    CHECK(s.p[0] == Catch::Approx(0.25));
    CHECK(s.p[1] == Catch::Approx(0.25));
    CHECK(s.p[2] == Catch::Approx(0.25));
    CHECK(s.p[3] == 0.0);
    CHECK(s.p[4] == Catch::Approx(0.25));
    s.validate();
    CHECK_THROWS_AS(bec_base_state(-0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(bec_base_state(0.5, 3), std::invalid_argument);
}

TEST_CASE("state_metrics") {
    for (double eps : {0.0, 0.3, 1.0}) {
        auto m = state_metrics(bec_base_state(eps, 1));
        CHECK(m.capacity == Catch::Approx(1.0 - eps).margin(1e-12));
        CHECK(m.z == Catch::Approx(eps).margin(1e-12));
        CHECK(m.pe_ambiguous == Catch::Approx(eps).margin(1e-12));
        CHECK(m.pe_guess == Catch::Approx(eps / 2).margin(1e-12));
    }
    SubgroupDist full;
    full.width = 2;
    full.p = {0, 0, 0, 0, 1};
    auto mf = state_metrics(full);
    CHECK(mf.capacity == 0.0);
    CHECK(mf.z == 1.0);
    CHECK(mf.pe_guess == Catch::Approx(0.75));
    SubgroupDist point;
    point.width = 2;
    point.p = {1, 0, 0, 0, 0};
    auto mp = state_metrics(point);
    CHECK(mp.capacity == 2.0);
    CHECK(mp.z == 0.0);
    CHECK(mp.pe_ambiguous == 0.0);
    CHECK(mp.pe_guess == 0.0);
}

TEST_CASE("de_split of (u+v,v) reproduces the classic BEC recursion") {
    for (double eps : {0.1, 0.5, 0.9}) {
        auto parent = bec_base_state(eps, 1);
        auto worse = de_split(arikan_kernel(), parent, 0);
        auto better = de_split(arikan_kernel(), parent, 1);
        CHECK(worse.p[1] == Catch::Approx(2 * eps - eps * eps).margin(1e-12));
        CHECK(better.p[1] == Catch::Approx(eps * eps).margin(1e-12));
    }
}

TEST_CASE("noiseless parent gives noiseless children") {
    auto parent = bec_base_state(0.0, 1);
    for (std::size_t i = 0; i < 3; ++i) {
        auto child = de_split(g1_kernel(), parent, i);
        CHECK(child.p[0] == Catch::Approx(1.0));
    }
}

TEST_CASE("de_split of g1 matches the DMC oracle") {
    auto parent = bec_base_state(0.5, 1);
    auto oracle = oracle_level1(0.5);
    for (std::size_t i = 0; i < 3; ++i) {
        auto child = de_split(g1_kernel(), parent, i);
        auto m = state_metrics(child);
        CHECK(m.capacity == Catch::Approx(capacity(oracle[i])).margin(1e-12));
        auto zb = bhattacharyya(oracle[i]);
        CHECK(m.z == Catch::Approx(zb.z).margin(1e-12));
        CHECK(m.z_max == Catch::Approx(zb.z_max).margin(1e-12));
        CHECK(m.z_min == Catch::Approx(zb.z_min).margin(1e-12));
    }
}

TEST_CASE("oracle equivalence for the mixed construction up to n=2") {
    for (double eps : {0.1, 0.5, 0.9}) {
        Layout lay1 = build_layout(Scheme::mixed, 1);
        DeResult de1 = de_evolve(lay1, eps);
        auto level1 = oracle_level1(eps);
        REQUIRE(de1.channels.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(de1.channels[i].metrics.capacity == Catch::Approx(capacity(level1[i])).margin(1e-12));
            CHECK(de1.channels[i].metrics.z == Catch::Approx(bhattacharyya(level1[i]).z).margin(1e-12));
        }

        Layout lay2 = build_layout(Scheme::mixed, 2);
        DeResult de2 = de_evolve(lay2, eps);
        REQUIRE(de2.channels.size() == 10);
        std::size_t pos = 0;
        for (std::size_t node = 0; node < 3; ++node) {
            const Kernel& k = level1[node].input_bits() == 1 ? g1_kernel() : g2_rs4_kernel();
            for (std::size_t i = 0; i < k.num_input_groups(); ++i, ++pos) {
                Dmc split = merge_equivalent_outputs(split_channel(k, level1[node], i));
                CHECK(de2.channels[pos].metrics.capacity == Catch::Approx(capacity(split)).margin(1e-12));
                auto zb = bhattacharyya(split);
                CHECK(de2.channels[pos].metrics.z == Catch::Approx(zb.z).margin(1e-12));
                CHECK(de2.channels[pos].metrics.z_max == Catch::Approx(zb.z_max).margin(1e-12));
                CHECK(de2.channels[pos].metrics.z_min == Catch::Approx(zb.z_min).margin(1e-12));
            }
        }
        REQUIRE(pos == 10);
    }
}

TEST_CASE("perfect channel everywhere at epsilon 0") {
    DeResult de = de_evolve(build_layout(Scheme::mixed, 3), 0.0);
    for (const auto& c : de.channels) {
        CHECK(c.metrics.pe_ambiguous == 0.0);
        CHECK(c.metrics.capacity == Catch::Approx(static_cast<double>(c.width)));
    }
}

TEST_CASE("martingale conservation at every level") {
    for (double eps : {0.1, 0.5, 0.9}) {
        for (Scheme s : {Scheme::mixed, Scheme::arikan, Scheme::rs4_top}) {
            Layout lay = build_layout(s, 4);
            DeTree tree = de_evolve_tree(lay, eps);
            double block_bits = static_cast<double>(lay.base_width);
            for (std::size_t k = 0; k <= lay.depth(); ++k) {
                double total = 0.0;
                for (const auto& st : tree.levels[k]) total += state_metrics(st).capacity;
                CHECK(std::abs(total / block_bits - (1.0 - eps)) < 1e-9);
                if (k < lay.depth()) block_bits *= static_cast<double>(lay.levels[k].arity);
            }
        }
    }
}

TEST_CASE("probability mass stays normalized through deep evolution") {
    DeResult de = de_evolve(build_layout(Scheme::mixed, 6), 0.37);
    for (const auto& c : de.channels) c.state.validate(1e-9);
    CHECK(mean_information(de) == Catch::Approx(0.63).margin(1e-9));
}

TEST_CASE("arikan DE keeps relative accuracy down to tiny error probabilities") {
    // Independent oracle: the classic scalar BEC recursion z -> (2z - z^2, z^2),
    // expanded in the same child order the construction uses. Catastrophic
    // cancellation in P_e would show up here long before it distorts curves.
    const int n = 6;  // 12 binary levels, N = 4096
    std::vector<double> z = {0.5};
    for (int lvl = 0; lvl < 2 * n; ++lvl) {
        std::vector<double> next;
        next.reserve(2 * z.size());
        for (double p : z) {
            next.push_back(2 * p - p * p);
            next.push_back(p * p);
        }
        z = std::move(next);
    }
    DeResult de = de_evolve(build_layout(Scheme::arikan, n), 0.5);
    REQUIRE(de.channels.size() == z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] > 1e-250) {
            CHECK(de.channels[i].metrics.pe_ambiguous ==
                  Catch::Approx(z[i]).epsilon(1e-9));
        } else {
            CHECK(de.channels[i].metrics.pe_ambiguous <= 1e-250);
        }
    }
}

TEST_CASE("polarization sets in between n=2 and n=6") {
    auto fraction_mid = [](int n) {
        DeResult de = de_evolve(build_layout(Scheme::mixed, n), 0.5);
        double mass = 0.0;
        for (const auto& c : de.channels) {
            double i_n = c.metrics.capacity / static_cast<double>(c.width);
            if (i_n > 0.1 && i_n < 0.9) mass += static_cast<double>(c.width);
        }
        return mass / static_cast<double>(de.n_bits);
    };
    CHECK(fraction_mid(6) < fraction_mid(2));
}
