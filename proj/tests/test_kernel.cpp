// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mixedpolar/kernel.hpp"

using namespace mixedpolar;

namespace {

CodeChain g1_chain() {
    CodeChain chain;
    chain.levels.push_back({BitMatrix::from_strings({"1000", "0101", "0011", "1111"}), 4, 4, 1});
    chain.levels.push_back({BitMatrix::from_strings({"0101", "0011", "1111"}), 4, 3, 2});
    chain.levels.push_back({BitMatrix::from_strings({"1111"}), 4, 1, 4});
    return chain;
}

// Definition-2 membership: walking the chain, x must stay in the coset of
// the next level's code selected by the inputs consumed so far.
bool coset_membership_holds(const Kernel& k, const CodeChain& chain, const BitVec& v) {
    BitVec x = k.apply(v);
    std::size_t consumed = 0;
    BitVec rep(k.total_bits());
    for (std::size_t lvl = 0; lvl < chain.levels.size(); ++lvl) {
        std::size_t width = k.input_width(lvl);
        // accumulate this level's representative from the kernel rows
        for (std::size_t b = 0; b < width; ++b)
            if (v[consumed + b]) rep ^= k.matrix().row(consumed + b);
        consumed += width;
        // x - rep must lie in the next level's code (zero code after the last)
        BitVec residue = x;
        residue ^= rep;
        if (lvl + 1 < chain.levels.size()) {
            const BitMatrix& gen = chain.levels[lvl + 1].generator;
            bool found = false;
            for (std::size_t mask = 0; mask < (std::size_t{1} << gen.rows()) && !found; ++mask) {
                BitVec w(gen.cols());
                for (std::size_t i = 0; i < gen.rows(); ++i)
                    if ((mask >> i) & 1) w ^= gen.row(i);
                found = (w == residue);
            }
            if (!found) return false;
        } else if (!residue.is_zero()) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("builtin g1 kernel") {
    const Kernel& g1 = g1_kernel();
    CHECK(g1.total_bits() == 4);
    CHECK(g1.input_widths() == std::vector<std::size_t>{1, 2, 1});
    CHECK(g1.arity() == 4);

    CHECK(g1.apply(BitVec(4)).is_zero());
    // unit-vector inputs reproduce the rows
    for (std::size_t i = 0; i < 4; ++i) {
        BitVec e(4);
        e.set(i, 1);
        CHECK(g1.apply(e) == g1.matrix().row(i));
    }
    CHECK(g1.apply(BitVec::from_string("1000")) == BitVec::from_string("1000"));
}

TEST_CASE("kernel_from_decomposition reproduces g1 and satisfies Definition 2") {
    Kernel k = kernel_from_decomposition(g1_chain(), "g1_from_chain");
    CHECK(k.input_widths() == std::vector<std::size_t>{1, 2, 1});
    CHECK(k.matrix() == g1_kernel().matrix());
    for (unsigned v = 0; v < 16; ++v)
        CHECK(coset_membership_holds(k, g1_chain(), BitVec::from_symbol(v, 4)));
    auto pd = partial_distances(k);
    CHECK(pd.d_min == std::vector<std::size_t>{1, 2, 4});
    CHECK(pd.d_max == std::vector<std::size_t>{1, 2, 4});
}

TEST_CASE("kernel from the (2,2,1)-(2,1,2) chain") {
    CodeChain chain;
    chain.levels.push_back({BitMatrix::from_strings({"10", "11"}), 2, 2, 1});
    chain.levels.push_back({BitMatrix::from_strings({"11"}), 2, 1, 2});
    Kernel k = kernel_from_decomposition(chain, "arikan_from_chain");
    CHECK(k.input_widths() == std::vector<std::size_t>{1, 1});
    auto pd = partial_distances(k);
    CHECK(pd.d_min == std::vector<std::size_t>{1, 2});
    CHECK(pd.d_max == std::vector<std::size_t>{1, 2});
}

TEST_CASE("single-level chain gives the identity kernel") {
    CodeChain chain;
    chain.levels.push_back({BitMatrix::identity(3), 3, 3, 1});
    Kernel k = kernel_from_decomposition(chain, "id3");
    CHECK(k.input_widths() == std::vector<std::size_t>{3});
    CHECK(k.matrix() == BitMatrix::identity(3));
}

TEST_CASE("decomposition validation errors name the violated level") {
    // not nested: level 2 is not inside level 1's span? use a chain where
    // level 2's code is not contained in level 2 of a shrunk level-1 space
    CodeChain bad;
    bad.levels.push_back({BitMatrix::from_strings({"1000", "0101", "0011", "1111"}), 4, 4, 1});
    bad.levels.push_back({BitMatrix::from_strings({"0101", "0011", "1111"}), 4, 3, 3});  // wrong d
    CHECK_THROWS_WITH(kernel_from_decomposition(bad, "bad"),
                      Catch::Matchers::ContainsSubstring("level 2"));

    CodeChain notstrict;
    notstrict.levels.push_back({BitMatrix::identity(2), 2, 2, 1});
    notstrict.levels.push_back({BitMatrix::identity(2), 2, 2, 1});
    CHECK_THROWS_AS(kernel_from_decomposition(notstrict, "bad"), std::invalid_argument);
}

TEST_CASE("partial distances of the builtin kernels") {
    auto pd1 = partial_distances(g1_kernel());
    CHECK(pd1.d_min == std::vector<std::size_t>{1, 2, 4});
    CHECK(pd1.d_max == std::vector<std::size_t>{1, 2, 4});

    auto pd2 = partial_distances(g2_rs4_kernel());
    CHECK(pd2.d_min == std::vector<std::size_t>{1, 2, 3, 4});
    CHECK(pd2.d_max == std::vector<std::size_t>{1, 2, 3, 4});

    auto pda = partial_distances(arikan_kernel());
    CHECK(pda.d_min == std::vector<std::size_t>{1, 2});

    auto pdq = partial_distances(quaternary_arikan_kernel());
    CHECK(pdq.d_min == std::vector<std::size_t>{1, 2});
    CHECK(pdq.d_max == std::vector<std::size_t>{1, 2});
}

TEST_CASE("partial distance minimization over prefixes equals the prefix-zero value") {
    for (const Kernel* k : {&g1_kernel(), &g2_rs4_kernel(), &quaternary_arikan_kernel()}) {
        auto pd = partial_distances(*k);
        // prefix-zero shortcut: fix the prefix to zero and minimize the rest
        for (std::size_t i = 0; i < k->num_input_groups(); ++i) {
            std::size_t off = k->input_offset(i);
            std::size_t w = k->input_width(i);
            std::size_t suf = k->total_bits() - off - w;
            std::size_t dmin = k->total_bits() + 1, dmax = 0;
            for (unsigned x = 0; x < (1u << w); ++x)
                for (unsigned xp = 0; xp < (1u << w); ++xp) {
                    if (x == xp) continue;
                    std::size_t pair_d = k->total_bits() + 1;
                    for (unsigned s1 = 0; s1 < (1u << suf); ++s1)
                        for (unsigned s2 = 0; s2 < (1u << suf); ++s2)
                            pair_d = std::min(pair_d,
                                              output_group_distance(*k, (x << off) | (s1 << (off + w)),
                                                                    (xp << off) | (s2 << (off + w))));
                    dmin = std::min(dmin, pair_d);
                    dmax = std::max(dmax, pair_d);
                }
            CHECK(pd.d_min[i] == dmin);
            CHECK(pd.d_max[i] == dmax);
        }
    }
}

TEST_CASE("exponent bounds") {
    auto b2 = exponent_bounds(g2_rs4_kernel());
    const double e_rs4 = (0.0 + 0.5 + std::log(3.0) / std::log(4.0) + 1.0) / 4.0;
    CHECK(b2.e1 == Catch::Approx(e_rs4).margin(1e-12));
    CHECK(b2.e2 == Catch::Approx(e_rs4).margin(1e-12));
    CHECK(b2.e1 == Catch::Approx(0.57312).margin(1e-5));

    auto ba = exponent_bounds(arikan_kernel());
    CHECK(ba.e1 == Catch::Approx(0.5).margin(1e-12));
    CHECK(ba.e2 == Catch::Approx(0.5).margin(1e-12));

    // the mixed construction's bounds equal g2's (single auxiliary kernel)
    auto mixed = mixed_exponent_bounds({b2});
    CHECK(mixed.e1 == Catch::Approx(b2.e1));
    CHECK(mixed.e2 == Catch::Approx(b2.e2));
}

TEST_CASE("g2 is GF(4)-linear") {
    const Kernel& g2 = g2_rs4_kernel();
    // multiplying every input symbol by a must multiply every output symbol by a
    auto mul_a = [](unsigned s) { return std::array<unsigned, 4>{0, 2, 3, 1}[s]; };
    for (unsigned v = 0; v < 256; ++v) {
        unsigned va = 0;
        for (int g = 0; g < 4; ++g) {
            unsigned s = (v >> (2 * g)) & 3u;
            va |= mul_a(s) << (2 * g);
        }
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(g2.output_symbol(va, j) == mul_a(g2.output_symbol(v, j)));
    }
}

TEST_CASE("kernel JSON round trip") {
    for (const Kernel* k : {&g1_kernel(), &g2_rs4_kernel(), &arikan_kernel()}) {
        Kernel back = Kernel::from_json(k->to_json());
        CHECK(back.matrix() == k->matrix());
        CHECK(back.input_widths() == k->input_widths());
        CHECK(back.output_widths() == k->output_widths());
        CHECK(back.name() == k->name());
    }
}

TEST_CASE("width bookkeeping invariants") {
    for (const Kernel* k : {&g1_kernel(), &g2_rs4_kernel(), &arikan_kernel(), &quaternary_arikan_kernel()}) {
        std::size_t sum = 0;
        for (std::size_t i = 0; i < k->num_input_groups(); ++i) sum += k->input_width(i);
        CHECK(sum == k->total_bits());
        auto b = exponent_bounds(*k);
        CHECK(b.e1 <= b.e2 + 1e-12);
        CHECK(b.e1 >= 0.0);
        CHECK(b.e2 <= 1.0 + 1e-12);
    }
}
