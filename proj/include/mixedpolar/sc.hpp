/*
Successive-cancellation decoder over the recursive mixed construction: a
generic likelihood-vector engine for any B-MC with an exact erasure path
(erasure likelihoods are 0/1-valued, so products keep zeros exact and an
ambiguity is simply a support of size > 1), plus a Monte-Carlo block-error
harness.

SPDX-License-Identifier: Apache-2.0
*/

#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include "mixedpolar/code_design.hpp"
#include "mixedpolar/dmc.hpp"
#include "mixedpolar/rng.hpp"

namespace mixedpolar {

/// Unnormalized likelihoods P(observation | symbol) for one symbol slot of
/// width 1 or 2. Decisions depend only on ratios.
struct LikelihoodVec {
    std::size_t width = 1;
    std::array<double, 4> v{};

    std::size_t num_symbols() const { return std::size_t{1} << width; }

    std::size_t support_size() const {
        std::size_t c = 0;
        for (std::size_t s = 0; s < num_symbols(); ++s) c += (v[s] > 0.0);
        return c;
    }

    std::uint8_t support_mask() const {
        std::uint8_t m = 0;
        for (std::size_t s = 0; s < num_symbols(); ++s)
            if (v[s] > 0.0) m |= static_cast<std::uint8_t>(1u << s);
        return m;
    }

    unsigned argmax() const {
        unsigned best = 0;
        for (unsigned s = 1; s < num_symbols(); ++s)
            if (v[s] > v[best]) best = s;  // ties resolve to the smallest symbol
        return best;
    }

    void normalize() {
        double m = 0.0;
        for (std::size_t s = 0; s < num_symbols(); ++s) m = std::max(m, v[s]);
        if (m <= 0.0) throw std::invalid_argument("LikelihoodVec: all-zero vector");
        for (std::size_t s = 0; s < num_symbols(); ++s) v[s] /= m;
    }
};

/// Likelihood vector of one channel use: P(y | x) over the input alphabet.
inline LikelihoodVec symbol_likelihoods(const Dmc& w, std::size_t y) {
    if (y >= w.num_outputs()) throw std::invalid_argument("symbol_likelihoods: unknown output letter");
    if (w.input_bits() > 2) throw std::invalid_argument("symbol_likelihoods: width above 2");
    LikelihoodVec lv;
    lv.width = w.input_bits();
    for (std::size_t x = 0; x < w.q(); ++x) lv.v[x] = w.prob(x, y);
    return lv;
}

/// A transmitted bit observed through the BEC: 0, 1, or erased(-1).
using BecWord = std::vector<std::int8_t>;
constexpr std::int8_t kErased = -1;

/// Per-use likelihood vectors; consecutive bits are combined when the layout
/// treats pairs as one quaternary use.
inline std::vector<LikelihoodVec> bec_likelihoods(const BecWord& word, std::size_t base_width) {
    if (word.size() % base_width != 0) throw std::invalid_argument("bec_likelihoods: length mismatch");
    auto bit_lv = [](std::int8_t b) -> std::array<double, 2> {
        if (b == kErased) return {1.0, 1.0};
        return b == 0 ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
    };
    std::vector<LikelihoodVec> out;
    out.reserve(word.size() / base_width);
    for (std::size_t u = 0; u < word.size(); u += base_width) {
        LikelihoodVec lv;
        lv.width = base_width;
        if (base_width == 1) {
            auto a = bit_lv(word[u]);
            lv.v = {a[0], a[1], 0.0, 0.0};
        } else {
            auto a = bit_lv(word[u]);
            auto b = bit_lv(word[u + 1]);
            for (unsigned s = 0; s < 4; ++s) lv.v[s] = a[s & 1u] * b[(s >> 1) & 1u];
        }
        out.push_back(lv);
    }
    return out;
}

/// Exact marginalization of one kernel step: the likelihood of input group
/// `group` given the copies' likelihood vectors and the decided prefix
/// symbols, with the remaining groups uniform.
inline LikelihoodVec kernel_step_likelihood(const Kernel& k, const std::vector<LikelihoodVec>& children,
                                            const std::vector<unsigned>& decided_prefix, std::size_t group) {
    if (children.size() != k.num_output_groups())
        throw std::invalid_argument("kernel_step_likelihood: wrong number of child vectors");
    if (decided_prefix.size() != group)
        throw std::invalid_argument("kernel_step_likelihood: prefix length mismatch");
    const std::size_t off = k.input_offset(group);
    const std::size_t w = k.input_width(group);
    const std::size_t suf_bits = k.total_bits() - off - w;

    unsigned pre = 0;
    for (std::size_t g = 0; g < group; ++g) pre |= decided_prefix[g] << k.input_offset(g);

    LikelihoodVec out;
    out.width = w;
    double max_total = 0.0;
    for (unsigned s = 0; s < (1u << w); ++s) {
        double total = 0.0;
        for (unsigned suf = 0; suf < (1u << suf_bits); ++suf) {
            const unsigned v = pre | (s << off) | (suf << (off + w));
            double prod = 1.0;
            for (std::size_t j = 0; j < children.size(); ++j)
                prod *= children[j].v[k.output_symbol(v, j)];
            total += prod;
        }
        out.v[s] = total;
        max_total = std::max(max_total, total);
    }
    if (max_total <= 0.0) {
        // a forced frozen value after an earlier wrong tie-break can leave no
        // consistent continuation; keep decoding deterministically
        for (unsigned s = 0; s < (1u << w); ++s) out.v[s] = 1.0;
        return out;
    }
    out.normalize();
    return out;
}

/// Channel decisions in tau order. Called with the channel ordinal and its
/// synthesized likelihood vector; returns the decided symbol value.
using Decider = std::function<unsigned(std::size_t, const LikelihoodVec&)>;

namespace detail {

/// One block of the recursive construction being SC-decoded. A level-k
/// block exposes its layout-level-k channels one at a time; querying a
/// channel pulls the matching channel of each copy one level down, in
/// lockstep.
class ScBlock {
  public:
    ScBlock(const Layout& lay, std::size_t level, const LikelihoodVec* obs)
        : lay_(&lay), level_(level), obs_(obs) {
        if (level_ > 0) {
            const std::size_t arity = lay.levels[level_ - 1].arity;
            const std::size_t sub_uses = uses(lay, level_ - 1);
            copies_.reserve(arity);
            for (std::size_t p = 0; p < arity; ++p)
                copies_.emplace_back(lay, level_ - 1, obs + p * sub_uses);
            node_syms_.reserve(8);
        }
    }

    static std::size_t uses(const Layout& lay, std::size_t level) {
        std::size_t u = 1;
        for (std::size_t k = 0; k < level; ++k) u *= lay.levels[k].arity;
        return u;
    }

    LikelihoodVec query_next() {
        if (level_ == 0) return *obs_;
        if (child_pos_ == 0) {
            node_lvs_.clear();
            for (auto& c : copies_) node_lvs_.push_back(c.query_next());
        }
        const Kernel& kern = node_kernel();
        return kernel_step_likelihood(kern, node_lvs_, node_syms_, child_pos_);
    }

    void push_decision(unsigned s) {
        if (level_ == 0) return;  // the raw use has nothing below it
        const Kernel& kern = node_kernel();
        node_syms_.push_back(s);
        ++child_pos_;
        if (child_pos_ == kern.num_input_groups()) {
            // assemble the node's input bits, transform, hand outputs down
            BitVec v(kern.total_bits());
            for (std::size_t g = 0; g < kern.num_input_groups(); ++g)
                for (std::size_t b = 0; b < kern.input_width(g); ++b)
                    v.set(kern.input_offset(g) + b, static_cast<int>((node_syms_[g] >> b) & 1u));
            const unsigned packed = v.to_symbol();
            for (std::size_t p = 0; p < copies_.size(); ++p)
                copies_[p].push_decision(kern.output_symbol(packed, p));
            node_syms_.clear();
            child_pos_ = 0;
            ++node_idx_;
        }
    }

  private:
    const Kernel& node_kernel() const {
        return lay_->kernel_for(level_, lay_->level_widths[level_ - 1][node_idx_]);
    }

    const Layout* lay_;
    std::size_t level_;
    const LikelihoodVec* obs_;
    std::vector<ScBlock> copies_;
    std::size_t node_idx_ = 0;
    std::size_t child_pos_ = 0;
    std::vector<LikelihoodVec> node_lvs_;
    std::vector<unsigned> node_syms_;
};

}  // namespace detail

struct ScResult {
    BitVec u;                             // every decided input bit
    std::vector<unsigned> symbols;        // per channel
    std::vector<std::uint8_t> ambiguous;  // support size > 1 before deciding
    std::vector<std::uint8_t> supports;   // positive-likelihood symbol mask
};

/// Run SC over the construction, letting `decide` pick each channel's value.
inline ScResult sc_run(const Layout& lay, const std::vector<LikelihoodVec>& obs, const Decider& decide) {
    if (obs.size() * lay.base_width != lay.n_bits) throw std::invalid_argument("sc_run: observation count");
    detail::ScBlock top(lay, lay.depth(), obs.data());
    auto chans = lay.channels();
    ScResult r;
    r.u = BitVec(lay.n_bits);
    r.symbols.reserve(chans.size());
    r.ambiguous.reserve(chans.size());
    r.supports.reserve(chans.size());
    for (std::size_t i = 0; i < chans.size(); ++i) {
        LikelihoodVec lv = top.query_next();
        r.ambiguous.push_back(lv.support_size() > 1);
        r.supports.push_back(lv.support_mask());
        unsigned s = decide(i, lv);
        r.symbols.push_back(s);
        for (std::size_t b = 0; b < chans[i].width; ++b)
            r.u.set(chans[i].start - 1 + b, static_cast<int>((s >> b) & 1u));
        top.push_decision(s);
    }
    return r;
}

/// Standard SC decoding: frozen channels forced to zero, information
/// channels decided by argmax with ties toward the smallest symbol.
inline ScResult sc_decode(const Layout& lay, const std::vector<LikelihoodVec>& obs,
                          const InformationSet& info) {
    if (info.selected.size() != lay.num_channels())
        throw std::invalid_argument("sc_decode: information set does not match the layout");
    return sc_run(lay, obs, [&](std::size_t ch, const LikelihoodVec& lv) -> unsigned {
        return info.selected[ch] ? lv.argmax() : 0u;
    });
}

struct BlerEstimate {
    double bler = 0.0;
    double stderr_ = 0.0;
    std::size_t errors = 0;
    std::size_t trials = 0;
};

/// Monte-Carlo block error rate under SC: a block fails when any selected
/// channel is ambiguous at decision time (the erasure analogue of a block
/// error, matching the per-channel P_e the union bound sums). Trial t draws
/// from Philox stream t, so the estimate is independent of the worker count.
inline BlerEstimate simulate_bler(const Layout& lay, const InformationSet& info, double eps,
                                  std::size_t trials, std::uint64_t seed, unsigned threads = 1) {
    if (trials < 1) throw std::invalid_argument("simulate_bler: trials must be >= 1");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("simulate_bler: epsilon outside [0,1]");
    auto chans = lay.channels();

    auto run_trial = [&](std::uint64_t t) -> bool {
        Philox rng(seed, t);
        BitVec u(lay.n_bits);
        for (std::size_t i = 0; i < chans.size(); ++i) {
            if (!info.selected[i]) continue;
            for (std::size_t b = 0; b < chans[i].width; ++b) u.set(chans[i].start - 1 + b, rng.bit());
        }
        BitVec x = encode(lay, u);
        BecWord word(lay.n_bits);
        for (std::size_t i = 0; i < lay.n_bits; ++i)
            word[i] = rng.bernoulli(eps) ? kErased : static_cast<std::int8_t>(x[i]);
        ScResult r = sc_decode(lay, bec_likelihoods(word, lay.base_width), info);
        for (std::size_t i = 0; i < chans.size(); ++i)
            if (info.selected[i] && r.ambiguous[i]) return true;
        return false;
    };

    std::atomic<std::size_t> next_batch{0};
    std::atomic<std::size_t> errors{0};
    constexpr std::size_t kBatch = 64;
    const std::size_t n_batches = (trials + kBatch - 1) / kBatch;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next_batch.fetch_add(1);
            if (b >= n_batches) return;
            std::size_t local = 0;
            const std::size_t hi = std::min(trials, (b + 1) * kBatch);
            for (std::size_t t = b * kBatch; t < hi; ++t) local += run_trial(t);
            errors.fetch_add(local);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    BlerEstimate est;
    est.trials = trials;
    est.errors = errors.load();
    est.bler = static_cast<double>(est.errors) / static_cast<double>(trials);
    est.stderr_ = std::sqrt(est.bler * (1.0 - est.bler) / static_cast<double>(trials));
    return est;
}

}  // namespace mixedpolar
