/*
Polarization kernels: GF(2)-linear maps with grouped input/output symbols,
kernels induced by nested binary code decompositions, brute-force partial
distances, and exponent bounds.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixedpolar/gf2.hpp"

namespace mixedpolar {

struct PartialDistances {
    std::vector<std::size_t> d_min;  // per input group
    std::vector<std::size_t> d_max;
};

struct ExponentBounds {
    double e1 = 0.0;
    double e2 = 0.0;
};

/// Invertible GF(2)-linear transform whose input and output coordinates are
/// partitioned into symbol groups. A group of width m holds one 2^m-ary
/// symbol; consecutive bits of a group encode the symbol with the first bit
/// as the least significant one.
class Kernel {
  public:
    Kernel(std::string name, BitMatrix matrix, std::vector<std::size_t> input_widths,
           std::vector<std::size_t> output_widths)
        : name_(std::move(name)),
          matrix_(std::move(matrix)),
          input_widths_(std::move(input_widths)),
          output_widths_(std::move(output_widths)) {
        if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("Kernel: matrix not square");
        total_bits_ = matrix_.rows();
        if (total_bits_ == 0 || total_bits_ > 16)
            throw std::invalid_argument("Kernel: supported sizes are 1..16 bits");
        auto check = [&](const std::vector<std::size_t>& widths, const char* side) {
            std::size_t sum = std::accumulate(widths.begin(), widths.end(), std::size_t{0});
            if (sum != total_bits_)
                throw std::invalid_argument(std::string("Kernel: ") + side + " widths do not partition L");
            for (auto w : widths)
                if (w == 0) throw std::invalid_argument("Kernel: zero-width group");
        };
        check(input_widths_, "input");
        check(output_widths_, "output");
        if (!matrix_.invertible()) throw std::invalid_argument("Kernel: matrix not invertible");
        inverse_ = matrix_.inverse();
        input_offsets_.resize(input_widths_.size());
        output_offsets_.resize(output_widths_.size());
        std::size_t off = 0;
        for (std::size_t i = 0; i < input_widths_.size(); ++i) {
            input_offsets_[i] = off;
            off += input_widths_[i];
        }
        off = 0;
        for (std::size_t j = 0; j < output_widths_.size(); ++j) {
            output_offsets_[j] = off;
            off += output_widths_[j];
        }
        build_symbol_table();
    }

    const std::string& name() const { return name_; }
    std::size_t total_bits() const { return total_bits_; }
    const BitMatrix& matrix() const { return matrix_; }
    const BitMatrix& inverse_matrix() const { return inverse_; }

    std::size_t num_input_groups() const { return input_widths_.size(); }
    std::size_t input_width(std::size_t i) const { return input_widths_[i]; }
    std::size_t input_offset(std::size_t i) const { return input_offsets_[i]; }
    const std::vector<std::size_t>& input_widths() const { return input_widths_; }

    std::size_t num_output_groups() const { return output_widths_.size(); }
    std::size_t output_width(std::size_t j) const { return output_widths_[j]; }
    std::size_t output_offset(std::size_t j) const { return output_offsets_[j]; }
    const std::vector<std::size_t>& output_widths() const { return output_widths_; }

    /// Number of output symbols; the recursion fan-out of the construction.
    std::size_t arity() const { return output_widths_.size(); }

    /// All output groups must share one width to be sent over copies of a
    /// single channel.
    std::size_t uniform_output_width() const {
        for (auto w : output_widths_)
            if (w != output_widths_[0]) throw std::invalid_argument("Kernel: non-uniform output widths");
        return output_widths_[0];
    }

    BitVec apply(const BitVec& v) const {
        if (v.size() != total_bits_) throw std::invalid_argument("Kernel: input length mismatch");
        return matrix_.mul_left(v);
    }

    /// Output symbol value of group j when the full input bit pattern is v
    /// (little-endian). Precomputed for all 2^L inputs.
    unsigned output_symbol(unsigned v, std::size_t j) const {
        return symbol_table_[static_cast<std::size_t>(v) * num_output_groups() + j];
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name_;
        j["L"] = total_bits_;
        j["input_widths"] = input_widths_;
        j["output_widths"] = output_widths_;
        // Hex strings per row; leftmost bit (index 1) is the most significant
        // hex digit's top bit.
        std::vector<std::string> rows;
        for (std::size_t r = 0; r < total_bits_; ++r) {
            unsigned long value = 0;
            for (std::size_t c = 0; c < total_bits_; ++c) value = (value << 1) | static_cast<unsigned>(matrix_.at(r, c));
            char buf[32];
            int digits = static_cast<int>((total_bits_ + 3) / 4);
            std::snprintf(buf, sizeof buf, "%0*lx", digits, value);
            rows.push_back(buf);
        }
        j["matrix_rows"] = rows;
        return j;
    }

    static Kernel from_json(const nlohmann::json& j) {
        std::size_t total = j.at("L").get<std::size_t>();
        std::vector<BitVec> rows;
        for (const auto& hex : j.at("matrix_rows")) {
            unsigned long value = std::stoul(hex.get<std::string>(), nullptr, 16);
            BitVec row(total);
            for (std::size_t c = 0; c < total; ++c) row.set(c, static_cast<int>((value >> (total - 1 - c)) & 1u));
            rows.push_back(std::move(row));
        }
        return Kernel(j.at("name").get<std::string>(), BitMatrix(std::move(rows)),
                      j.at("input_widths").get<std::vector<std::size_t>>(),
                      j.at("output_widths").get<std::vector<std::size_t>>());
    }

  private:
    void build_symbol_table() {
        const std::size_t total = std::size_t{1} << total_bits_;
        symbol_table_.resize(total * num_output_groups());
        for (std::size_t v = 0; v < total; ++v) {
            BitVec x = apply(BitVec::from_symbol(static_cast<unsigned>(v), total_bits_));
            for (std::size_t j = 0; j < num_output_groups(); ++j)
                symbol_table_[v * num_output_groups() + j] =
                    x.slice(output_offsets_[j], output_widths_[j]).to_symbol();
        }
    }

    std::string name_;
    BitMatrix matrix_;
    BitMatrix inverse_;
    std::vector<std::size_t> input_widths_, output_widths_;
    std::vector<std::size_t> input_offsets_, output_offsets_;
    std::size_t total_bits_ = 0;
    std::vector<unsigned> symbol_table_;
};

/// One level of a nested code chain: a generator matrix with its declared
/// (n, k, d) parameters.
struct CodeLevel {
    BitMatrix generator;
    std::size_t n, k, d;
};

/// Chain C_1 > C_2 > ... > C_m (strict nesting); the zero code C_{m+1} is
/// implicit, so the last level's cosets are singletons.
struct CodeChain {
    std::vector<CodeLevel> levels;
};

namespace detail {

inline bool in_span(const std::vector<BitVec>& basis, const BitVec& v) {
    if (basis.empty()) return v.is_zero();
    std::vector<BitVec> rows = basis;
    BitMatrix m(rows);
    std::size_t r0 = m.rank();
    rows.push_back(v);
    BitMatrix m2(rows);
    return m2.rank() == r0;
}

inline std::size_t min_weight(const BitMatrix& gen) {
    std::size_t k = gen.rows();
    std::size_t best = gen.cols() + 1;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
        BitVec w(gen.cols());
        for (std::size_t i = 0; i < k; ++i)
            if ((mask >> i) & 1) w ^= gen.row(i);
        best = std::min(best, w.weight());
    }
    return best;
}

}  // namespace detail

/// Build the kernel induced by a binary code decomposition. Coset
/// representatives for level i are taken from the level's generator rows, in
/// order, keeping rows independent of the next level's code; this makes the
/// induced map GF(2)-linear and the construction deterministic.
inline Kernel kernel_from_decomposition(const CodeChain& chain, const std::string& name) {
    if (chain.levels.empty()) throw std::invalid_argument("kernel_from_decomposition: empty chain");
    const std::size_t ell = chain.levels[0].n;
    if (ell > 16) throw CapacityError("kernel_from_decomposition: length above 16");
    if (chain.levels[0].k != ell)
        throw std::invalid_argument("kernel_from_decomposition: level 1 must be the full space");

    std::vector<std::vector<BitVec>> bases;  // row space basis per level
    for (std::size_t lvl = 0; lvl < chain.levels.size(); ++lvl) {
        const CodeLevel& c = chain.levels[lvl];
        if (c.n != ell)
            throw std::invalid_argument("kernel_from_decomposition: length mismatch at level " +
                                        std::to_string(lvl + 1));
        if (c.generator.cols() != ell || c.generator.rows() != c.k || c.generator.rank() != c.k)
            throw std::invalid_argument("kernel_from_decomposition: generator rank != k at level " +
                                        std::to_string(lvl + 1));
        if (lvl > 0) {
            if (c.k >= chain.levels[lvl - 1].k)
                throw std::invalid_argument("kernel_from_decomposition: sizes not strictly nested at level " +
                                            std::to_string(lvl + 1));
            for (std::size_t r = 0; r < c.k; ++r)
                if (!detail::in_span(bases[lvl - 1], c.generator.row(r)))
                    throw std::invalid_argument("kernel_from_decomposition: chain not nested at level " +
                                                std::to_string(lvl + 1));
        }
        if (detail::min_weight(c.generator) < c.d)
            throw std::invalid_argument("kernel_from_decomposition: distance below declared d at level " +
                                        std::to_string(lvl + 1));
        std::vector<BitVec> basis;
        for (std::size_t r = 0; r < c.k; ++r) basis.push_back(c.generator.row(r));
        bases.push_back(std::move(basis));
    }

    const std::size_t m = chain.levels.size();
    std::vector<BitVec> kernel_rows;
    std::vector<std::size_t> widths;
    for (std::size_t lvl = 0; lvl < m; ++lvl) {
        std::size_t k_next = (lvl + 1 < m) ? chain.levels[lvl + 1].k : 0;
        std::size_t need = chain.levels[lvl].k - k_next;
        std::vector<BitVec> span_so_far;
        if (lvl + 1 < m) span_so_far = bases[lvl + 1];
        std::size_t got = 0;
        for (std::size_t r = 0; r < chain.levels[lvl].k && got < need; ++r) {
            const BitVec& cand = chain.levels[lvl].generator.row(r);
            if (!detail::in_span(span_so_far, cand)) {
                span_so_far.push_back(cand);
                kernel_rows.push_back(cand);
                ++got;
            }
        }
        if (got != need)
            throw std::invalid_argument("kernel_from_decomposition: could not pick representatives at level " +
                                        std::to_string(lvl + 1));
        widths.push_back(need);
    }

    BitMatrix g(kernel_rows);
    if (!g.invertible())
        throw std::invalid_argument("kernel_from_decomposition: assembled matrix not invertible");
    return Kernel(name, std::move(g), widths, std::vector<std::size_t>(ell, 1));
}

inline BitVec apply_kernel(const Kernel& k, const BitVec& v) { return k.apply(v); }

/// Hamming distance counted over output symbol groups.
inline std::size_t output_group_distance(const Kernel& k, unsigned a, unsigned b) {
    std::size_t d = 0;
    for (std::size_t j = 0; j < k.num_output_groups(); ++j) d += (k.output_symbol(a, j) != k.output_symbol(b, j));
    return d;
}

/// Exact partial distances by exhaustive minimization over prefixes, symbol
/// pairs and suffix pairs. Throws CapacityError when the enumeration would
/// be too large.
inline PartialDistances partial_distances(const Kernel& k, double ops_cap = 5e8) {
    const std::size_t total = k.total_bits();
    if (total > 16) throw CapacityError("partial_distances: kernel above 16 bits");
    PartialDistances pd;
    for (std::size_t i = 0; i < k.num_input_groups(); ++i) {
        const std::size_t off = k.input_offset(i);
        const std::size_t w = k.input_width(i);
        const std::size_t suf = total - off - w;
        const double ops = std::ldexp(1.0, static_cast<int>(off)) * std::ldexp(1.0, static_cast<int>(2 * suf)) *
                           std::ldexp(1.0, static_cast<int>(2 * w));
        if (ops > ops_cap) throw CapacityError("partial_distances: enumeration above cap");

        std::size_t dmin = total + 1, dmax = 0;
        const unsigned npre = 1u << off;
        const unsigned nsym = 1u << w;
        const unsigned nsuf = 1u << suf;
        for (unsigned x = 0; x < nsym; ++x) {
            for (unsigned xp = 0; xp < nsym; ++xp) {
                if (x == xp) continue;
                std::size_t pair_d = total + 1;
                for (unsigned pre = 0; pre < npre; ++pre) {
                    for (unsigned s1 = 0; s1 < nsuf; ++s1) {
                        unsigned a = pre | (x << off) | (s1 << (off + w));
                        for (unsigned s2 = 0; s2 < nsuf; ++s2) {
                            unsigned b = pre | (xp << off) | (s2 << (off + w));
                            pair_d = std::min(pair_d, output_group_distance(k, a, b));
                        }
                    }
                }
                dmin = std::min(dmin, pair_d);
                dmax = std::max(dmax, pair_d);
            }
        }
        pd.d_min.push_back(dmin);
        pd.d_max.push_back(dmax);
    }
    return pd;
}

inline ExponentBounds exponent_bounds(const Kernel& k, const PartialDistances& pd) {
    const double ell = static_cast<double>(k.num_output_groups());
    ExponentBounds b;
    for (std::size_t i = 0; i < pd.d_min.size(); ++i) {
        b.e1 += std::log(static_cast<double>(pd.d_min[i])) / std::log(ell);
        b.e2 += std::log(static_cast<double>(pd.d_max[i])) / std::log(ell);
    }
    b.e1 /= ell;
    b.e2 /= ell;
    return b;
}

inline ExponentBounds exponent_bounds(const Kernel& k) { return exponent_bounds(k, partial_distances(k)); }

/// Bounds for a mixed construction: the weakest lower bound and the largest
/// upper bound among the auxiliary kernels.
inline ExponentBounds mixed_exponent_bounds(const std::vector<ExponentBounds>& aux) {
    if (aux.empty()) throw std::invalid_argument("mixed_exponent_bounds: no auxiliary kernels");
    ExponentBounds b = aux[0];
    for (const auto& e : aux) {
        b.e1 = std::min(b.e1, e.e1);
        b.e2 = std::max(b.e2, e.e2);
    }
    return b;
}

// ---------------------------------------------------------------------------
// Built-in kernels.

/// 4-bit kernel induced by the (4,4,1)-(4,3,2)-(4,1,4) decomposition, input
/// groups [1,2,1]. Row 1 is an odd-weight representative, rows 2-3 span the
/// even-weight code modulo repetition, row 4 is the repetition word.
inline const Kernel& g1_kernel() {
    static const Kernel k("g1", BitMatrix::from_strings({"1000", "0101", "0011", "1111"}),
                          {1, 2, 1}, {1, 1, 1, 1});
    return k;
}

namespace detail {

/// 2x2 GF(2) blocks realizing multiplication by GF(4) constants, acting on
/// row vectors (b1, b2) with b1 the low bit. Elements are 0,1,a,a^2 encoded
/// as 0,1,2,3 with a^2 = a + 1.
inline const BitMatrix& gf4_mult_block(unsigned c) {
    static const BitMatrix blocks[4] = {
        BitMatrix::from_strings({"00", "00"}),
        BitMatrix::from_strings({"10", "01"}),
        BitMatrix::from_strings({"01", "11"}),
        BitMatrix::from_strings({"11", "10"}),
    };
    return blocks[c];
}

inline BitMatrix gf4_block_matrix(const std::vector<std::vector<unsigned>>& q) {
    std::size_t n = q.size();
    BitMatrix m(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const BitMatrix& blk = gf4_mult_block(q[i][j]);
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c) m.set(2 * i + r, 2 * j + c, blk.at(r, c));
        }
    return m;
}

}  // namespace detail

/// Quaternary kernel of the extended Reed-Solomon code of length 4 over
/// GF(4), realized as an 8x8 GF(2) matrix. Row i evaluates the monomial
/// x^(4-i) at the points (0, 1, a, a^2); the suffix row spans are then the
/// nested [4, j, 5-j] MDS codes, which gives partial distances (1,2,3,4).
inline const Kernel& g2_rs4_kernel() {
    static const Kernel k = [] {
        const unsigned A = 2, A2 = 3;
        std::vector<std::vector<unsigned>> q = {
            {0, 1, 1, 1},
            {0, 1, A2, A},
            {0, 1, A, A2},
            {1, 1, 1, 1},
        };
        return Kernel("g2_rs4", detail::gf4_block_matrix(q), {2, 2, 2, 2}, {2, 2, 2, 2});
    }();
    return k;
}

/// Arikan's binary (u+v, v) kernel.
inline const Kernel& arikan_kernel() {
    static const Kernel k("arikan2", BitMatrix::from_strings({"10", "11"}), {1, 1}, {1, 1});
    return k;
}

/// The (u+v, v) map over quaternary symbols (symbol-wise XOR needs no GF(4)
/// multiplication).
inline const Kernel& quaternary_arikan_kernel() {
    static const Kernel k("arikan4", BitMatrix::from_strings({"1000", "0100", "1010", "0101"}),
                          {2, 2}, {2, 2});
    return k;
}

}  // namespace mixedpolar
