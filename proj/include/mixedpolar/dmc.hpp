/*
Brute-force-exact discrete memoryless channels: symmetric capacity,
Bhattacharyya parameters, generic channel splitting under a kernel, and
merging of equivalent outputs. This is the oracle that validates the fast
erasure density evolution.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mixedpolar/kernel.hpp"

namespace mixedpolar {

/// Channel with input alphabet {0,...,2^w - 1} given as an explicit table
/// p[x][y]. Rows must be probability distributions.
class Dmc {
  public:
    Dmc(std::size_t input_bits, std::vector<std::vector<double>> p)
        : input_bits_(input_bits), p_(std::move(p)) {
        const std::size_t q = std::size_t{1} << input_bits_;
        if (p_.size() != q) throw std::invalid_argument("Dmc: wrong number of input rows");
        for (const auto& row : p_) {
            if (row.size() != p_[0].size()) throw std::invalid_argument("Dmc: ragged rows");
            double sum = 0.0;
            for (double v : row) {
                if (v < 0.0) throw std::invalid_argument("Dmc: negative probability");
                sum += v;
            }
            if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("Dmc: row does not sum to 1");
        }
    }

    std::size_t input_bits() const { return input_bits_; }
    std::size_t q() const { return std::size_t{1} << input_bits_; }
    std::size_t num_outputs() const { return p_[0].size(); }
    double prob(std::size_t x, std::size_t y) const { return p_[x][y]; }
    const std::vector<double>& row(std::size_t x) const { return p_[x]; }

  private:
    std::size_t input_bits_;
    std::vector<std::vector<double>> p_;
};

/// Binary erasure channel; outputs 0, 1, erasure.
inline Dmc make_bec(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("make_bec: epsilon outside [0,1]");
    return Dmc(1, {{1.0 - eps, 0.0, eps}, {0.0, 1.0 - eps, eps}});
}

/// Product of two channels used side by side as one wider channel. The
/// first factor supplies the low input bits and the fast output index.
inline Dmc dmc_product(const Dmc& a, const Dmc& b) {
    const std::size_t qa = a.q(), qb = b.q();
    const std::size_t na = a.num_outputs(), nb = b.num_outputs();
    std::vector<std::vector<double>> p(qa * qb, std::vector<double>(na * nb));
    for (std::size_t xb = 0; xb < qb; ++xb)
        for (std::size_t xa = 0; xa < qa; ++xa)
            for (std::size_t yb = 0; yb < nb; ++yb)
                for (std::size_t ya = 0; ya < na; ++ya)
                    p[xa + (xb << a.input_bits())][ya + yb * na] = a.prob(xa, ya) * b.prob(xb, yb);
    return Dmc(a.input_bits() + b.input_bits(), std::move(p));
}

/// Symmetric capacity (uniform input), in bits per channel use.
inline double capacity(const Dmc& w) {
    const double inv_q = 1.0 / static_cast<double>(w.q());
    double cap = 0.0;
    for (std::size_t y = 0; y < w.num_outputs(); ++y) {
        double py = 0.0;
        for (std::size_t x = 0; x < w.q(); ++x) py += inv_q * w.prob(x, y);
        if (py <= 0.0) continue;
        for (std::size_t x = 0; x < w.q(); ++x) {
            double pxy = w.prob(x, y);
            if (pxy <= 0.0) continue;
            cap += inv_q * pxy * std::log2(pxy / py);
        }
    }
    return cap;
}

/// Z_{x,x'} = sum_y sqrt(P(y|x) P(y|x')) for every ordered pair.
inline std::vector<std::vector<double>> bhattacharyya_pairs(const Dmc& w) {
    std::vector<std::vector<double>> z(w.q(), std::vector<double>(w.q(), 0.0));
    for (std::size_t x = 0; x < w.q(); ++x)
        for (std::size_t xp = 0; xp < w.q(); ++xp) {
            double s = 0.0;
            for (std::size_t y = 0; y < w.num_outputs(); ++y) s += std::sqrt(w.prob(x, y) * w.prob(xp, y));
            z[x][xp] = s;
        }
    return z;
}

struct Bhattacharyya {
    double z = 0.0;      // average over ordered distinct pairs
    double z_max = 0.0;
    double z_min = 0.0;
};

inline Bhattacharyya bhattacharyya(const Dmc& w) {
    auto pairs = bhattacharyya_pairs(w);
    Bhattacharyya out;
    out.z_min = 2.0;
    const std::size_t q = w.q();
    for (std::size_t x = 0; x < q; ++x)
        for (std::size_t xp = 0; xp < q; ++xp) {
            if (x == xp) continue;
            out.z += pairs[x][xp];
            out.z_max = std::max(out.z_max, pairs[x][xp]);
            out.z_min = std::min(out.z_min, pairs[x][xp]);
        }
    out.z /= static_cast<double>(q * (q - 1));
    return out;
}

/// Split channel for input group i (0-based) of kernel k over independent
/// copies of W: output alphabet is (y_1..y_ell, v_1^{i-1}) with the decided
/// prefix folded into the output (genie-aided convention), priors uniform.
/// Output letter index: prefix * ny^ell + sum_j y_j * ny^(ell-1-j).
inline Dmc split_channel(const Kernel& k, const Dmc& w, std::size_t group, double cap = 1e8) {
    const std::size_t ell = k.num_output_groups();
    if (k.uniform_output_width() != w.input_bits())
        throw std::invalid_argument("split_channel: channel width mismatch");
    const std::size_t total = k.total_bits();
    const std::size_t ny = w.num_outputs();
    const std::size_t prefix_bits = k.input_offset(group);
    const std::size_t m_i = k.input_width(group);

    double y_tuples = 1.0;
    for (std::size_t j = 0; j < ell; ++j) y_tuples *= static_cast<double>(ny);
    if (y_tuples * std::ldexp(1.0, static_cast<int>(total)) > cap)
        throw CapacityError("split_channel: enumeration above cap");

    const std::size_t n_tuples = static_cast<std::size_t>(y_tuples);
    const std::size_t n_out = n_tuples << prefix_bits;
    std::vector<std::vector<double>> p(std::size_t{1} << m_i, std::vector<double>(n_out, 0.0));
    const double weight = std::ldexp(1.0, -static_cast<int>(total - m_i));

    // running tensor product over output positions, one row of W per symbol
    std::vector<double> acc(n_tuples);
    for (unsigned v = 0; v < (1u << total); ++v) {
        const unsigned prefix = v & ((1u << prefix_bits) - 1u);
        const unsigned sym = (v >> prefix_bits) & ((1u << m_i) - 1u);
        std::size_t filled = 1;
        acc[0] = weight;
        for (std::size_t j = 0; j < ell; ++j) {
            const auto& row = w.row(k.output_symbol(v, j));
            for (std::size_t t = filled; t-- > 0;) {
                const double base = acc[t];
                for (std::size_t y = ny; y-- > 0;) acc[t * ny + y] = base * row[y];
            }
            filled *= ny;
        }
        auto& dest = p[sym];
        const std::size_t off = static_cast<std::size_t>(prefix) * n_tuples;
        for (std::size_t t = 0; t < n_tuples; ++t) dest[off + t] += acc[t];
    }
    return Dmc(m_i, std::move(p));
}

/// Merge output letters whose likelihood vectors are proportional; zero-mass
/// letters are dropped. Capacity and every pairwise Z are preserved.
inline Dmc merge_equivalent_outputs(const Dmc& w) {
    const std::size_t q = w.q();
    struct Letter {
        std::vector<double> key;
        std::vector<double> p;
    };
    std::vector<Letter> letters;
    for (std::size_t y = 0; y < w.num_outputs(); ++y) {
        std::vector<double> col(q);
        double maxv = 0.0;
        for (std::size_t x = 0; x < q; ++x) {
            col[x] = w.prob(x, y);
            maxv = std::max(maxv, col[x]);
        }
        if (maxv <= 0.0) continue;
        std::vector<double> key(q);
        for (std::size_t x = 0; x < q; ++x) key[x] = std::round(col[x] / maxv * 1e12) / 1e12;
        letters.push_back({std::move(key), std::move(col)});
    }
    std::sort(letters.begin(), letters.end(), [](const Letter& a, const Letter& b) { return a.key < b.key; });
    std::vector<std::vector<double>> p(q);
    std::size_t out = 0;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i > 0 && letters[i].key == letters[i - 1].key) {
            for (std::size_t x = 0; x < q; ++x) p[x][out - 1] += letters[i].p[x];
        } else {
            for (std::size_t x = 0; x < q; ++x) p[x].push_back(letters[i].p[x]);
            ++out;
        }
    }
    return Dmc(w.input_bits(), std::move(p));
}

}  // namespace mixedpolar
