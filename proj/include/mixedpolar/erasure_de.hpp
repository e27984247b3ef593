/*
Exact density evolution over the BEC. A synthesized channel's state is a
probability distribution over ambiguity subgroups of (Z/2)^w: kernels are
GF(2)-linear, priors uniform and erasure observations are linear
constraints, so the SC posterior of a symbol is always uniform over a coset
of some subgroup. Tracking the subgroup distribution is therefore exact and
scales to the full 2^14-bit construction.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "mixedpolar/layout.hpp"

namespace mixedpolar {

/// Canonical subgroup list of (Z/2)^w (by order, then lexicographic basis).
inline const std::vector<Subgroup>& canonical_subgroups(std::size_t w) {
    static const std::vector<Subgroup> w0 = subgroups(0);
    static const std::vector<Subgroup> w1 = subgroups(1);
    static const std::vector<Subgroup> w2 = subgroups(2);
    switch (w) {
        case 0: return w0;
        case 1: return w1;
        case 2: return w2;
        default: throw std::invalid_argument("canonical_subgroups: width > 2 unsupported");
    }
}

inline std::size_t canonical_subgroup_index(const Subgroup& h) {
    const auto& list = canonical_subgroups(h.width());
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] == h) return i;
    throw std::logic_error("canonical_subgroup_index: subgroup not found");
}

/// Distribution over the canonical subgroups of (Z/2)^w, w in {1,2}.
struct SubgroupDist {
    std::size_t width = 1;
    std::array<double, 5> p{};  // first num_states() entries are used

    std::size_t num_states() const { return width == 1 ? 2 : 5; }

    void validate(double tol = 1e-12) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < num_states(); ++i) {
            if (p[i] < -tol) throw std::invalid_argument("SubgroupDist: negative probability");
            sum += p[i];
        }
        if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("SubgroupDist: probabilities do not sum to 1");
    }
};

/// State of width independent BEC(eps) uses seen as one channel.
inline SubgroupDist bec_base_state(double eps, std::size_t width) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("bec_base_state: epsilon outside [0,1]");
    SubgroupDist s;
    s.width = width;
    if (width == 1) {
        s.p[0] = 1.0 - eps;
        s.p[1] = eps;
    } else if (width == 2) {
        // canonical order: trivial, span{01}, span{10}, span{11}, full
        s.p[0] = (1.0 - eps) * (1.0 - eps);
        s.p[1] = (1.0 - eps) * eps;  // second bit erased
        s.p[2] = eps * (1.0 - eps);  // first bit erased
        s.p[3] = 0.0;                // diagonal not reachable from independent uses
        s.p[4] = eps * eps;
    } else {
        throw std::invalid_argument("bec_base_state: width unsupported");
    }
    return s;
}

struct StateMetrics {
    double capacity = 0.0;      // I(W), bits (up to the width)
    double z = 0.0;             // average Bhattacharyya parameter
    double z_max = 0.0;
    double z_min = 0.0;
    double pe_ambiguous = 0.0;  // P(any residual ambiguity)
    double pe_guess = 0.0;      // P(uniform coset guess is wrong)
};

inline StateMetrics state_metrics(const SubgroupDist& s) {
    const auto& subs = canonical_subgroups(s.width);
    const std::size_t q = std::size_t{1} << s.width;
    StateMetrics m;
    m.capacity = static_cast<double>(s.width);
    std::array<double, 4> z_delta{};  // z_delta[d] = P(d in H), d != 0
    for (std::size_t i = 0; i < s.num_states(); ++i) {
        const double pi = s.p[i];
        const std::size_t order = subs[i].order();
        m.capacity -= pi * std::log2(static_cast<double>(order));
        m.z += pi * static_cast<double>(order - 1);
        m.pe_guess += pi * (1.0 - 1.0 / static_cast<double>(order));
        // summing the nontrivial masses (rather than 1 - p_trivial) keeps
        // the relative accuracy of very small error probabilities
        if (i > 0) m.pe_ambiguous += pi;
        const std::uint32_t mask = subs[i].element_mask();
        for (std::size_t d = 1; d < q; ++d)
            if ((mask >> d) & 1u) z_delta[d] += pi;
    }
    m.z /= static_cast<double>(q - 1);
    m.z_max = 0.0;
    m.z_min = 2.0;
    for (std::size_t d = 1; d < q; ++d) {
        m.z_max = std::max(m.z_max, z_delta[d]);
        m.z_min = std::min(m.z_min, z_delta[d]);
    }
    return m;
}

namespace detail {

/// Per-kernel transition tables: for every joint realization of the copies'
/// ambiguity subgroups, the resulting child subgroup of each input group.
struct KernelDeTables {
    std::size_t parent_states = 0;  // subgroup count for the output width
    std::size_t arity = 0;
    std::size_t combos = 0;
    std::vector<std::vector<std::uint8_t>> child_index;  // [group][combo]
    std::vector<std::size_t> child_width;
};

inline KernelDeTables build_de_tables(const Kernel& k) {
    KernelDeTables t;
    const std::size_t w_out = k.uniform_output_width();
    const std::size_t total = k.total_bits();
    const auto& parent_subs = canonical_subgroups(w_out);
    t.parent_states = parent_subs.size();
    t.arity = k.num_output_groups();
    t.combos = 1;
    for (std::size_t j = 0; j < t.arity; ++j) t.combos *= t.parent_states;

    const BitMatrix& ginv = k.inverse_matrix();
    t.child_index.resize(k.num_input_groups());
    for (auto& v : t.child_index) v.resize(t.combos);
    for (std::size_t i = 0; i < k.num_input_groups(); ++i) t.child_width.push_back(k.input_width(i));

    for (std::size_t combo = 0; combo < t.combos; ++combo) {
        // lift the product subgroup through the inverse map
        std::vector<BitVec> lifted;
        std::size_t rest = combo;
        for (std::size_t j = 0; j < t.arity; ++j) {
            const Subgroup& h = parent_subs[rest % t.parent_states];
            rest /= t.parent_states;
            for (const auto& b : h.basis()) {
                BitVec z(total);
                for (std::size_t bit = 0; bit < w_out; ++bit)
                    if (b[bit]) z.set(k.output_offset(j) + bit, 1);
                lifted.push_back(ginv.mul_left(z));
            }
        }
        for (std::size_t i = 0; i < k.num_input_groups(); ++i) {
            const std::size_t prefix = k.input_offset(i);
            std::vector<BitVec> constrained;
            if (lifted.empty() || prefix == 0) {
                constrained = lifted;
            } else {
                // coefficient combinations whose prefix bits vanish
                BitMatrix pre(lifted.size(), prefix);
                for (std::size_t r = 0; r < lifted.size(); ++r)
                    for (std::size_t c = 0; c < prefix; ++c) pre.set(r, c, lifted[r][c]);
                auto sol = solve_affine(pre, BitVec(prefix));
                for (const auto& coeff : sol->kernel) {
                    BitVec v(total);
                    for (std::size_t r = 0; r < lifted.size(); ++r)
                        if (coeff[r]) v ^= lifted[r];
                    constrained.push_back(std::move(v));
                }
            }
            std::vector<BitVec> proj;
            for (const auto& v : constrained) proj.push_back(v.slice(prefix, k.input_width(i)));
            Subgroup child = Subgroup::from_generators(k.input_width(i), proj);
            t.child_index[i][combo] = static_cast<std::uint8_t>(canonical_subgroup_index(child));
        }
    }
    return t;
}

inline const KernelDeTables& de_tables(const Kernel& k) {
    static std::mutex mtx;
    static std::map<const Kernel*, std::unique_ptr<KernelDeTables>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(&k);
    if (it == cache.end())
        it = cache.emplace(&k, std::make_unique<KernelDeTables>(build_de_tables(k))).first;
    return *it->second;
}

}  // namespace detail

/// One splitting step: the child state of input group i when every copy of
/// the kernel's output goes through an independent channel in state
/// `parent`. For each joint realization (H_1..H_ell) the child ambiguity is
/// the projection of {v : v_prefix = 0, vG in H_1 x ... x H_ell} onto the
/// group's coordinates.
inline SubgroupDist de_split(const Kernel& k, const SubgroupDist& parent, std::size_t group) {
    if (parent.width != k.uniform_output_width())
        throw std::invalid_argument("de_split: parent width mismatch");
    const auto& t = detail::de_tables(k);
    SubgroupDist child;
    child.width = t.child_width[group];
    const auto& idx = t.child_index[group];
    const std::size_t s = t.parent_states;
    for (std::size_t combo = 0; combo < t.combos; ++combo) {
        double prob = 1.0;
        std::size_t rest = combo;
        for (std::size_t j = 0; j < t.arity; ++j) {
            prob *= parent.p[rest % s];
            rest /= s;
        }
        child.p[idx[combo]] += prob;
    }
    return child;
}

/// Channel states for every tree level of a layout.
struct DeTree {
    std::vector<std::vector<SubgroupDist>> levels;  // [0..depth][node]
};

inline DeTree de_evolve_tree(const Layout& lay, double eps) {
    DeTree tree;
    tree.levels.resize(lay.depth() + 1);
    tree.levels[0] = {bec_base_state(eps, lay.base_width)};
    for (std::size_t k = 1; k <= lay.depth(); ++k) {
        const auto& prev = tree.levels[k - 1];
        auto& cur = tree.levels[k];
        cur.reserve(lay.level_widths[k].size());
        for (const auto& node : prev) {
            const Kernel& kern = lay.kernel_for(k, node.width);
            for (std::size_t i = 0; i < kern.num_input_groups(); ++i)
                cur.push_back(de_split(kern, node, i));
        }
    }
    return tree;
}

struct DeChannel {
    std::size_t start = 0;
    std::size_t width = 0;
    SubgroupDist state;
    StateMetrics metrics;
};

struct DeResult {
    Scheme scheme;
    int n = 0;
    std::size_t n_bits = 0;
    double epsilon = 0.0;
    std::vector<DeChannel> channels;
};

inline DeResult de_from_tree(const Layout& lay, const DeTree& tree, double eps) {
    DeResult r;
    r.scheme = lay.scheme;
    r.n = lay.n;
    r.n_bits = lay.n_bits;
    r.epsilon = eps;
    auto chans = lay.channels();
    const auto& final_states = tree.levels.back();
    r.channels.reserve(chans.size());
    for (std::size_t i = 0; i < chans.size(); ++i)
        r.channels.push_back({chans[i].start, chans[i].width, final_states[i], state_metrics(final_states[i])});
    return r;
}

/// Exact per-channel profile of the full construction; no sampling.
inline DeResult de_evolve(const Layout& lay, double eps) {
    return de_from_tree(lay, de_evolve_tree(lay, eps), eps);
}

/// Width-weighted mean of I_n per the probabilistic method: each channel
/// counts #(tau_n(i)) bits of weight, its value is I(W)/width.
inline double mean_information(const DeResult& de) {
    double acc = 0.0;
    for (const auto& c : de.channels) acc += c.metrics.capacity;
    return acc / static_cast<double>(de.n_bits);
}

}  // namespace mixedpolar
