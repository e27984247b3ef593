// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "mixedpolar/gf2.hpp"

using namespace mixedpolar;

namespace {

BitVec random_vec(std::mt19937& rng, std::size_t n) {
    BitVec v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, static_cast<int>(rng() & 1u));
    return v;
}

BitMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
    BitMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.set(i, j, static_cast<int>(rng() & 1u));
    return m;
}

}  // namespace

TEST_CASE("bitvec basics") {
    BitVec v = BitVec::from_string("0101");
    CHECK(v.size() == 4);
    CHECK(v[1] == 1);
    CHECK(v.weight() == 2);
    CHECK(v.to_string() == "0101");
    // first coordinate is the least significant bit
    CHECK(BitVec::from_symbol(2, 2).to_string() == "01");
    CHECK(BitVec::from_string("10").to_symbol() == 1u);
    CHECK_THROWS_AS(v ^= BitVec(3), std::invalid_argument);
}

TEST_CASE("hamming distance") {
    CHECK(hamming_distance(BitVec::from_string("0000"), BitVec::from_string("0000")) == 0);
    CHECK(hamming_distance(BitVec::from_string("0000"), BitVec::from_string("1111")) == 4);
    CHECK(hamming_distance(BitVec::from_string("0101"), BitVec::from_string("0011")) == 2);
    CHECK_THROWS_AS(hamming_distance(BitVec(3), BitVec(4)), std::invalid_argument);
}

TEST_CASE("matrix rank and inverse") {
    BitMatrix id = BitMatrix::identity(4);
    CHECK(id.rank() == 4);
    CHECK(id.inverse() == id);

    BitMatrix g1 = BitMatrix::from_strings({"1000", "0101", "0011", "1111"});
    CHECK(g1.rank() == 4);
    BitMatrix inv = g1.inverse();
    CHECK(g1.mul(inv) == id);
    CHECK(inv.mul(g1) == id);

    BitMatrix singular = BitMatrix::from_strings({"10", "10"});
    CHECK(singular.rank() == 1);
    CHECK_THROWS_AS(singular.inverse(), std::invalid_argument);
}

TEST_CASE("solve_affine identity and zero") {
    BitMatrix id = BitMatrix::identity(5);
    BitVec b = BitVec::from_string("10110");
    auto s = solve_affine(id, b);
    REQUIRE(s.has_value());
    CHECK(s->unique());
    CHECK(s->particular == b);

    BitMatrix zero(3, 3);
    auto full = solve_affine(zero, BitVec(3));
    REQUIRE(full.has_value());
    CHECK(full->dimension() == 3);
    CHECK(!solve_affine(zero, BitVec::from_string("100")).has_value());

    CHECK_THROWS_AS(solve_affine(id, BitVec(4)), std::invalid_argument);
}

TEST_CASE("solve_affine random systems verified by substitution") {
    std::mt19937 rng(12345);
    int solvable = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t r = 1 + rng() % 6;
        std::size_t c = 1 + rng() % 6;
        BitMatrix a = random_matrix(rng, r, c);
        BitVec b = random_vec(rng, c);
        auto s = solve_affine(a, b);
        if (!s) {
            // confirmed inconsistent: no x in the row space reaches b
            continue;
        }
        ++solvable;
        CHECK(a.mul_left(s->particular) == b);
        for (const auto& k : s->kernel) {
            CHECK(a.mul_left(k).is_zero());
            BitVec x = s->particular;
            x ^= k;
            CHECK(a.mul_left(x) == b);
        }
        // kernel basis is independent
        if (!s->kernel.empty()) {
            BitMatrix km(s->kernel);
            CHECK(km.rank() == s->kernel.size());
        }
    }
    CHECK(solvable > 200);
}

TEST_CASE("subgroup lattice enumeration") {
    auto s0 = subgroups(0);
    REQUIRE(s0.size() == 1);
    CHECK(s0[0].trivial());

    auto s1 = subgroups(1);
    REQUIRE(s1.size() == 2);
    CHECK(s1[0].order() == 1);
    CHECK(s1[1].order() == 2);

    auto s2 = subgroups(2);
    REQUIRE(s2.size() == 5);
    CHECK(s2[0].order() == 1);
    CHECK(s2[1].basis()[0].to_string() == "01");
    CHECK(s2[2].basis()[0].to_string() == "10");
    CHECK(s2[3].basis()[0].to_string() == "11");
    CHECK(s2[4].order() == 4);
    // canonicalization leaves no duplicates
    std::set<std::uint32_t> masks;
    for (const auto& h : s2) masks.insert(h.element_mask());
    CHECK(masks.size() == 5);

    CHECK_THROWS_AS(subgroups(3), std::invalid_argument);
}

TEST_CASE("subgroup membership is exact for every difference") {
    for (std::size_t w : {std::size_t{1}, std::size_t{2}}) {
        auto subs = subgroups(w);
        unsigned q = 1u << w;
        for (unsigned x = 0; x < q; ++x) {
            for (unsigned xp = 0; xp < q; ++xp) {
                if (x == xp) continue;
                BitVec d = BitVec::from_symbol(x ^ xp, w);
                for (const auto& h : subs) {
                    bool in_mask = (h.element_mask() >> (x ^ xp)) & 1u;
                    CHECK(h.contains(d) == in_mask);
                }
            }
        }
    }
}

TEST_CASE("project_solution_subgroup") {
    // unique solution -> trivial subgroup
    AffineSet unique{BitVec::from_string("1010"), {}};
    CHECK(project_solution_subgroup(unique, 0, 2).trivial());

    // full space, width 2 -> full group
    AffineSet full{BitVec(4), {BitVec::from_string("1000"), BitVec::from_string("0100"),
                               BitVec::from_string("0010"), BitVec::from_string("0001")}};
    CHECK(project_solution_subgroup(full, 2, 2).order() == 4);

    // kernel {1111}, bits 2..3 (0-based 1..2) -> subgroup generated by 11
    AffineSet rep{BitVec(4), {BitVec::from_string("1111")}};
    Subgroup h = project_solution_subgroup(rep, 1, 2);
    CHECK(h.order() == 2);
    CHECK(h.basis()[0].to_string() == "11");

    std::optional<AffineSet> none;
    CHECK_THROWS_AS(project_solution_subgroup(none, 0, 1), std::invalid_argument);
}
