/*
Recursive mixed-kernel construction: layouts (channel lists and the kernel
applied at every tree level), recursive encoding, and the equivalent
generator matrix.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mixedpolar/kernel.hpp"

namespace mixedpolar {

enum class Scheme { mixed, arikan, rs4_top };

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::mixed: return "mixed";
        case Scheme::arikan: return "arikan";
        case Scheme::rs4_top: return "rs4_top";
    }
    return "?";
}

inline Scheme scheme_from_string(const std::string& s) {
    if (s == "mixed") return Scheme::mixed;
    if (s == "arikan") return Scheme::arikan;
    if (s == "rs4_top") return Scheme::rs4_top;
    throw std::invalid_argument("unknown scheme: " + s);
}

/// Materialized construction for block length 4^n. Level k of the tree maps
/// the channels of level k-1 through one kernel each; level 0 is the raw
/// channel use (base_width bits). Channels are kept in the allocation order
/// of the construction algorithm, so the final level reproduces tau_n.
class Layout {
  public:
    struct Level {
        const Kernel* kernel_w1 = nullptr;  // applied to width-1 parents
        const Kernel* kernel_w2 = nullptr;  // applied to width-2 parents
        std::size_t arity = 0;              // parallel copies of the previous block
    };
    struct Channel {
        std::size_t start = 0;  // 1-based index of the channel's first input bit
        std::size_t width = 0;
    };

    Scheme scheme;
    int n = 0;                     // block length exponent: N = 4^n bits
    std::size_t n_bits = 0;        // N
    std::size_t base_width = 1;    // bits per raw channel use group
    std::vector<Level> levels;     // levels[k] sits between tree levels k and k+1
    std::vector<std::vector<std::uint8_t>> level_widths;  // [0..depth][node]

    std::size_t depth() const { return levels.size(); }
    std::size_t num_channels() const { return level_widths.back().size(); }

    const Kernel& kernel_for(std::size_t level_index, std::size_t parent_width) const {
        const Level& lvl = levels[level_index - 1];
        const Kernel* k = parent_width == 1 ? lvl.kernel_w1 : lvl.kernel_w2;
        if (!k) throw std::invalid_argument("Layout: no kernel for this parent width");
        return *k;
    }

    std::vector<Channel> channels() const {
        std::vector<Channel> out;
        out.reserve(num_channels());
        std::size_t pos = 1;
        for (auto w : level_widths.back()) {
            out.push_back({pos, w});
            pos += w;
        }
        return out;
    }
};

/// Build a layout. n counts quaternary recursion steps for every scheme, so
/// the block length is always 4^n bits: arikan uses 2n binary (u+v,v)
/// stages, rs4_top is two RS(4) towers of depth n-1 joined by a quaternary
/// (u+v,v) stage next to the channel.
inline Layout build_layout(Scheme scheme, int n, int n_cap = 8) {
    if (n < 1) throw std::invalid_argument("build_layout: n must be >= 1");
    if (n > n_cap) throw CapacityError("build_layout: N = 4^n exceeds the configured cap");

    Layout lay;
    lay.scheme = scheme;
    lay.n = n;
    lay.n_bits = std::size_t{1} << (2 * n);

    switch (scheme) {
        case Scheme::mixed:
            lay.base_width = 1;
            lay.levels.assign(static_cast<std::size_t>(n), {&g1_kernel(), &g2_rs4_kernel(), 4});
            break;
        case Scheme::arikan:
            lay.base_width = 1;
            lay.levels.assign(static_cast<std::size_t>(2 * n), {&arikan_kernel(), nullptr, 2});
            break;
        case Scheme::rs4_top:
            lay.base_width = 2;
            lay.levels.assign(static_cast<std::size_t>(n), {nullptr, &g2_rs4_kernel(), 4});
            lay.levels[0] = {nullptr, &quaternary_arikan_kernel(), 2};
            break;
    }

    lay.level_widths.resize(lay.depth() + 1);
    lay.level_widths[0] = {static_cast<std::uint8_t>(lay.base_width)};
    for (std::size_t k = 1; k <= lay.depth(); ++k) {
        const auto& prev = lay.level_widths[k - 1];
        auto& cur = lay.level_widths[k];
        for (auto w : prev) {
            const Kernel& kern = lay.kernel_for(k, w);
            if (kern.uniform_output_width() != w)
                throw std::invalid_argument("build_layout: kernel output width mismatch");
            for (std::size_t i = 0; i < kern.num_input_groups(); ++i) {
                std::size_t cw = kern.input_width(i);
                if (cw > 2) throw std::invalid_argument("build_layout: widths above 2 unsupported");
                cur.push_back(static_cast<std::uint8_t>(cw));
            }
        }
    }
    return lay;
}

/// Number of glued (width-2) channels in the final level.
inline std::size_t glued_channel_count(const Layout& lay) {
    std::size_t g = 0;
    for (auto w : lay.level_widths.back()) g += (w == 2);
    return g;
}

namespace detail {

inline void encode_rec(const Layout& lay, std::size_t level, const std::uint8_t* u, std::uint8_t* x,
                       std::size_t n_bits) {
    if (level == 0) {
        for (std::size_t i = 0; i < n_bits; ++i) x[i] = u[i];
        return;
    }
    const auto& nodes = lay.level_widths[level - 1];
    const std::size_t arity = lay.levels[level - 1].arity;
    const std::size_t sub_bits = n_bits / arity;
    std::vector<std::uint8_t> copies(n_bits, 0);  // copy p occupies [p*sub_bits, ...)

    std::size_t consumed = 0;
    std::size_t node_off = 0;  // bit offset of the node inside a level-(k-1) block
    for (auto w : nodes) {
        const Kernel& kern = lay.kernel_for(level, w);
        const std::size_t in_bits = kern.total_bits();
        BitVec v(in_bits);
        for (std::size_t b = 0; b < in_bits; ++b) v.set(b, u[consumed + b]);
        BitVec out = kern.apply(v);
        for (std::size_t p = 0; p < arity; ++p)
            for (std::size_t b = 0; b < w; ++b)
                copies[p * sub_bits + node_off + b] = static_cast<std::uint8_t>(out[p * w + b]);
        consumed += in_bits;
        node_off += w;
    }
    std::vector<std::uint8_t> sub_out(sub_bits);
    for (std::size_t p = 0; p < arity; ++p) {
        encode_rec(lay, level - 1, copies.data() + p * sub_bits, sub_out.data(), sub_bits);
        for (std::size_t i = 0; i < sub_bits; ++i) x[p * sub_bits + i] = sub_out[i];
    }
}

}  // namespace detail

/// Recursive application of the construction: u -> codeword, both N bits.
inline BitVec encode(const Layout& lay, const BitVec& u) {
    if (u.size() != lay.n_bits) throw std::invalid_argument("encode: length mismatch");
    std::vector<std::uint8_t> uu(lay.n_bits), xx(lay.n_bits);
    for (std::size_t i = 0; i < lay.n_bits; ++i) uu[i] = static_cast<std::uint8_t>(u[i]);
    detail::encode_rec(lay, lay.depth(), uu.data(), xx.data(), lay.n_bits);
    BitVec x(lay.n_bits);
    for (std::size_t i = 0; i < lay.n_bits; ++i) x.set(i, xx[i]);
    return x;
}

/// N x N matrix M with encode(u) = u M, assembled from unit vectors.
inline BitMatrix equivalent_generator_matrix(const Layout& lay, std::size_t bit_cap = 4096) {
    if (lay.n_bits > bit_cap) throw CapacityError("equivalent_generator_matrix: N exceeds the cap");
    std::vector<BitVec> rows;
    rows.reserve(lay.n_bits);
    for (std::size_t i = 0; i < lay.n_bits; ++i) {
        BitVec e(lay.n_bits);
        e.set(i, 1);
        rows.push_back(encode(lay, e));
    }
    return BitMatrix(std::move(rows));
}

inline nlohmann::json layout_to_json(const Layout& lay) {
    nlohmann::json j;
    j["scheme"] = scheme_name(lay.scheme);
    j["n"] = lay.n;
    j["N"] = lay.n_bits;
    j["nu"] = lay.num_channels();
    j["gamma"] = glued_channel_count(lay);
    nlohmann::json chans = nlohmann::json::array();
    for (const auto& c : lay.channels()) {
        nlohmann::json jc;
        nlohmann::json idx = nlohmann::json::array();
        for (std::size_t b = 0; b < c.width; ++b) idx.push_back(c.start + b);
        jc["indices"] = idx;
        jc["width"] = c.width;
        chans.push_back(jc);
    }
    j["channels"] = chans;
    return j;
}

}  // namespace mixedpolar
