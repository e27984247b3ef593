/*
Information-set selection and union-bound block-error-vs-rate curves.
Glued channels are atomic (selected or frozen as a whole). With channel
widths limited to {1,2}, the minimum-P_e set of total width exactly K is
found exactly: sort each width class by ascending P_e and scan the number
of width-2 picks.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mixedpolar/erasure_de.hpp"

namespace mixedpolar {

struct InformationSet {
    std::vector<std::uint8_t> selected;  // per channel, in layout order
    std::size_t k_target = 0;
    std::size_t k_achieved = 0;
    bool exact = true;  // false when k_target is not reachable
};

namespace detail {

struct DesignOrder {
    std::vector<std::size_t> w1, w2;  // channel positions by (P_e asc, index asc)
    std::vector<double> a, b;         // prefix P_e sums: a over w1, b over w2
};

inline DesignOrder design_order(const DeResult& de) {
    DesignOrder d;
    for (std::size_t i = 0; i < de.channels.size(); ++i)
        (de.channels[i].width == 1 ? d.w1 : d.w2).push_back(i);
    auto by_pe = [&](std::size_t x, std::size_t y) {
        if (de.channels[x].metrics.pe_ambiguous != de.channels[y].metrics.pe_ambiguous)
            return de.channels[x].metrics.pe_ambiguous < de.channels[y].metrics.pe_ambiguous;
        return x < y;
    };
    std::sort(d.w1.begin(), d.w1.end(), by_pe);
    std::sort(d.w2.begin(), d.w2.end(), by_pe);
    d.a.assign(d.w1.size() + 1, 0.0);
    d.b.assign(d.w2.size() + 1, 0.0);
    for (std::size_t i = 0; i < d.w1.size(); ++i)
        d.a[i + 1] = d.a[i] + de.channels[d.w1[i]].metrics.pe_ambiguous;
    for (std::size_t j = 0; j < d.w2.size(); ++j)
        d.b[j + 1] = d.b[j] + de.channels[d.w2[j]].metrics.pe_ambiguous;
    return d;
}

/// Best number of width-2 channels for an exact total of k bits, or -1 when
/// k is not reachable.
inline std::ptrdiff_t best_w2_count(const DesignOrder& d, std::size_t k) {
    std::ptrdiff_t best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    const std::size_t j_hi = std::min(d.w2.size(), k / 2);
    for (std::size_t j = 0; j <= j_hi; ++j) {
        const std::size_t ones = k - 2 * j;
        if (ones > d.w1.size()) continue;
        const double cost = d.b[j] + d.a[ones];
        if (cost < best_cost) {
            best_cost = cost;
            best = static_cast<std::ptrdiff_t>(j);
        }
    }
    return best;
}

}  // namespace detail

/// Minimum-union-bound set of channels whose widths sum to exactly K; when
/// no exact-K set exists (only width-2 channels and K odd), the nearest
/// achievable K below is returned with exact = false.
inline InformationSet select_information_set(const DeResult& de, std::size_t k_bits) {
    if (k_bits > de.n_bits) throw std::invalid_argument("select_information_set: K above N");
    InformationSet s;
    s.selected.assign(de.channels.size(), 0);
    s.k_target = k_bits;

    auto d = detail::design_order(de);
    std::size_t k = k_bits;
    std::ptrdiff_t j = detail::best_w2_count(d, k);
    while (j < 0 && k > 0) j = detail::best_w2_count(d, --k);
    if (j >= 0) {
        for (std::ptrdiff_t t = 0; t < j; ++t) s.selected[d.w2[static_cast<std::size_t>(t)]] = 1;
        for (std::size_t t = 0; t < k - 2 * static_cast<std::size_t>(j); ++t) s.selected[d.w1[t]] = 1;
    }
    s.k_achieved = k;
    s.exact = (k == k_bits);
    return s;
}

/// Union bound: one error-probability term per selected channel.
inline double block_error_bound(const DeResult& de, const InformationSet& s) {
    if (s.selected.size() != de.channels.size())
        throw std::invalid_argument("block_error_bound: set does not match the profile");
    double bound = 0.0;
    for (std::size_t i = 0; i < de.channels.size(); ++i)
        if (s.selected[i]) bound += de.channels[i].metrics.pe_ambiguous;
    return bound;
}

struct CurvePoint {
    double rate = 0.0;
    std::size_t k_target = 0;
    std::size_t k_achieved = 0;
    double bound = 0.0;
    bool exact = true;
};

inline std::vector<CurvePoint> rate_curve(const DeResult& de, const std::vector<double>& rate_grid) {
    std::vector<CurvePoint> out;
    for (double r : rate_grid) {
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("rate_curve: rate outside [0,1]");
        auto k = static_cast<std::size_t>(std::llround(r * static_cast<double>(de.n_bits)));
        InformationSet s = select_information_set(de, k);
        out.push_back({r, k, s.k_achieved, block_error_bound(de, s), s.exact});
    }
    return out;
}

inline std::vector<CurvePoint> rate_curve(Scheme scheme, int n, double eps,
                                          const std::vector<double>& rate_grid) {
    DeResult de = de_evolve(build_layout(scheme, n), eps);
    return rate_curve(de, rate_grid);
}

/// Union bound of the selected set for every reachable K (infinity where K
/// is unreachable).
inline std::vector<double> bounds_for_all_k(const DeResult& de) {
    auto d = detail::design_order(de);
    std::vector<double> bound(de.n_bits + 1, std::numeric_limits<double>::infinity());
    bound[0] = 0.0;
    for (std::size_t k = 1; k <= de.n_bits; ++k) {
        std::ptrdiff_t j = detail::best_w2_count(d, k);
        if (j >= 0) bound[k] = d.b[static_cast<std::size_t>(j)] + d.a[k - 2 * static_cast<std::size_t>(j)];
    }
    return bound;
}

/// Largest achievable rate whose union bound stays at or below the target.
inline double rate_at_bound(const DeResult& de, double target) {
    auto bounds = bounds_for_all_k(de);
    std::size_t best = 0;
    for (std::size_t k = 0; k < bounds.size(); ++k)
        if (bounds[k] <= target) best = k;
    return static_cast<double>(best) / static_cast<double>(de.n_bits);
}

}  // namespace mixedpolar
