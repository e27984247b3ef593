// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixedpolar/dmc.hpp"

using namespace mixedpolar;

namespace {

Dmc bec_pair(double eps) { return dmc_product(make_bec(eps), make_bec(eps)); }

double chain_rule_gap(const Kernel& k, const Dmc& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < k.num_input_groups(); ++i) sum += capacity(split_channel(k, w, i));
    return std::abs(sum - static_cast<double>(k.num_output_groups()) * capacity(w));
}

}  // namespace

TEST_CASE("make_bec") {
    Dmc clean = make_bec(0.0);
    CHECK(capacity(clean) == Catch::Approx(1.0).margin(1e-12));
    Dmc useless = make_bec(1.0);
    CHECK(capacity(useless) == Catch::Approx(0.0).margin(1e-12));
    Dmc half = make_bec(0.5);
    CHECK(capacity(half) == Catch::Approx(0.5).margin(1e-12));
    CHECK_THROWS_AS(make_bec(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_bec(1.1), std::invalid_argument);
}

TEST_CASE("capacity formula") {
    for (double eps : {0.1, 0.25, 0.5, 0.9})
        CHECK(capacity(make_bec(eps)) == Catch::Approx(1.0 - eps).margin(1e-12));
    // noiseless two-bit channel
    Dmc noiseless2 = dmc_product(make_bec(0.0), make_bec(0.0));
    CHECK(capacity(noiseless2) == Catch::Approx(2.0).margin(1e-12));
    Dmc useless2 = dmc_product(make_bec(1.0), make_bec(1.0));
    CHECK(capacity(useless2) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("bhattacharyya parameters") {
    for (double eps : {0.0, 0.3, 0.5, 1.0}) {
        auto b = bhattacharyya(make_bec(eps));
        CHECK(b.z == Catch::Approx(eps).margin(1e-12));
        // binary inputs: max = min = average
        CHECK(b.z_max == Catch::Approx(b.z).margin(1e-12));
        CHECK(b.z_min == Catch::Approx(b.z).margin(1e-12));
    }
    auto pair = bhattacharyya(bec_pair(0.5));
    CHECK(pair.z_max <= 1.0 + 1e-12);
    CHECK(pair.z_min >= 0.0);
}

TEST_CASE("(u+v,v) splits of the BEC recover the classic recursion") {
    Dmc w = make_bec(0.5);
    Dmc s0 = merge_equivalent_outputs(split_channel(arikan_kernel(), w, 0));
    Dmc s1 = merge_equivalent_outputs(split_channel(arikan_kernel(), w, 1));
    CHECK(s0.num_outputs() == 3);
    CHECK(s1.num_outputs() == 3);
    CHECK(capacity(s0) == Catch::Approx(0.25).margin(1e-12));
    CHECK(capacity(s1) == Catch::Approx(0.75).margin(1e-12));
    CHECK(bhattacharyya(s0).z == Catch::Approx(0.75).margin(1e-12));
    CHECK(bhattacharyya(s1).z == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("g1 over a noiseless channel splits into noiseless channels") {
    Dmc w = make_bec(0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        Dmc s = split_channel(g1_kernel(), w, i);
        CHECK(capacity(s) == Catch::Approx(static_cast<double>(g1_kernel().input_width(i))).margin(1e-9));
        CHECK(bhattacharyya(s).z_max == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("information is conserved by splitting") {
    // 4 I(W) = I(W^(1)) + I(W^(2,3)) + I(W^(4)) on the BEC(0.5)
    Dmc w = make_bec(0.5);
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) total += capacity(split_channel(g1_kernel(), w, i));
    CHECK(total == Catch::Approx(2.0).margin(1e-9));

    for (double eps : {0.1, 0.5, 0.9}) {
        CHECK(chain_rule_gap(g1_kernel(), make_bec(eps)) < 1e-9);
        CHECK(chain_rule_gap(arikan_kernel(), make_bec(eps)) < 1e-9);
        CHECK(chain_rule_gap(quaternary_arikan_kernel(), bec_pair(eps)) < 1e-9);
        CHECK(chain_rule_gap(g2_rs4_kernel(), bec_pair(eps)) < 1e-9);
    }
}

TEST_CASE("merge_equivalent_outputs") {
    // canonical BEC is unchanged
    Dmc w = make_bec(0.3);
    Dmc m = merge_equivalent_outputs(w);
    CHECK(m.num_outputs() == 3);
    CHECK(capacity(m) == Catch::Approx(capacity(w)).margin(1e-12));

    // a BEC whose erasure letter was split in two merges back
    Dmc split2(1, {{0.7, 0.0, 0.2, 0.1}, {0.0, 0.7, 0.2, 0.1}});
    Dmc back = merge_equivalent_outputs(split2);
    CHECK(back.num_outputs() == 3);
    CHECK(capacity(back) == Catch::Approx(0.7).margin(1e-12));
    CHECK(bhattacharyya(back).z == Catch::Approx(0.3).margin(1e-12));

    // idempotent under a second merge
    Dmc once = merge_equivalent_outputs(split_channel(g1_kernel(), make_bec(0.5), 1));
    Dmc twice = merge_equivalent_outputs(once);
    CHECK(once.num_outputs() == twice.num_outputs());
    CHECK(capacity(once) == Catch::Approx(capacity(twice)).margin(1e-12));
}

TEST_CASE("merging preserves capacity and every pairwise Z") {
    for (double eps : {0.1, 0.5, 0.9}) {
        for (std::size_t i = 0; i < 3; ++i) {
            Dmc s = split_channel(g1_kernel(), make_bec(eps), i);
            Dmc m = merge_equivalent_outputs(s);
            CHECK(capacity(m) == Catch::Approx(capacity(s)).margin(1e-12));
            auto za = bhattacharyya_pairs(s);
            auto zb = bhattacharyya_pairs(m);
            for (std::size_t x = 0; x < s.q(); ++x)
                for (std::size_t xp = 0; xp < s.q(); ++xp)
                    CHECK(zb[x][xp] == Catch::Approx(za[x][xp]).margin(1e-12));
        }
    }
}

TEST_CASE("glued split of g1 obeys the pairwise Z sandwich") {
    // (1/2) Z(W)^2 <= Z_{x,x'} <= 2 Z(W)^2 with D^(2) = 2
    for (double eps : {0.05, 0.3, 0.5, 0.8, 0.95}) {
        Dmc s = merge_equivalent_outputs(split_channel(g1_kernel(), make_bec(eps), 1));
        auto z = bhattacharyya_pairs(s);
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t xp = 0; xp < 4; ++xp) {
                if (x == xp) continue;
                CHECK(z[x][xp] >= 0.5 * eps * eps - 1e-12);
                CHECK(z[x][xp] <= 2.0 * eps * eps + 1e-12);
            }
    }
}

TEST_CASE("split enumeration cap") {
    std::vector<std::vector<double>> rows(4, std::vector<double>(100, 0.01));
    Dmc wide(2, std::move(rows));
    CHECK_THROWS_AS(split_channel(g2_rs4_kernel(), wide, 0), CapacityError);
    CHECK_THROWS_AS(split_channel(g2_rs4_kernel(), make_bec(0.5), 0), std::invalid_argument);
}
