#pragma once

#include <algorithm>
#include <cstring>
#include <numeric>
#include <vector>

#include "polar/code.hpp"
#include "polar/decode_result.hpp"
#include "polar/errors.hpp"
#include "polar/llr.hpp"
#include "polar/prune_tree.hpp"
#include "polar/select.hpp"

namespace polar {

// How per-path partial sums are stored.
//  copy:   one private arena of n bits per path; duplication copies the
//          prefix that is still live.
//  shared: per-depth pools of banks with reference counts; duplication
//          bumps counters and writers clone on demand.
enum class PsumLayout { copy, shared };

// Successive-cancellation list decoding over one LLR representation, driven
// by the same decode tree as the one-path decoder.  Works for any tree: the
// unpruned tree gives textbook list decoding, pruned trees fork at whole
// special nodes.  Fixed-point metrics saturate and are renormalised (minimum
// alive metric pulled back to zero) after every decision step.
template <class R>
class ListDecoder {
public:
    using B = typename llr_traits<R>::bit_type;

    ListDecoder(const PolarCode& code, const PruneTree& tree, int l_max,
                PsumLayout layout)
        : code_(&code), tree_(&tree), n_(code.n), stages_(tree.stages()),
          lmax_(l_max), layout_(layout) {
        if (tree.n() != code.n)
            throw ConfigError("decode tree is sized for N = " +
                              std::to_string(tree.n()) + ", code has N = " +
                              std::to_string(code.n));
        if (lmax_ < 1 || (lmax_ & (lmax_ - 1)) != 0)
            throw ConfigError("list capacity must be a power of two, got " +
                              std::to_string(lmax_));
        llr_.resize(std::size_t(lmax_) * 2 * std::size_t(n_));
        metric_.resize(std::size_t(lmax_));
        alive_.assign(std::size_t(lmax_), 0);
        hard_.resize(std::size_t(lmax_) * std::size_t(n_));
        fold_.resize(std::size_t(n_));
        absv_.resize(std::size_t(n_));
        first_use_.resize(std::size_t(lmax_));
        if (layout_ == PsumLayout::copy) {
            ps_.resize(std::size_t(lmax_) * std::size_t(n_));
        } else {
            depth_off_.resize(std::size_t(stages_) + 2);
            depth_off_[0] = 0;
            for (int d = 0; d <= stages_; ++d)
                depth_off_[std::size_t(d) + 1] =
                    depth_off_[std::size_t(d)] + std::size_t(n_ >> d);
            bank_.resize(std::size_t(lmax_) * (2 * std::size_t(n_) - 1));
            bank_of_.assign(std::size_t(lmax_) * (std::size_t(stages_) + 1), -1);
            refcnt_.assign((std::size_t(stages_) + 1) * std::size_t(lmax_), 0);
            free_.resize((std::size_t(stages_) + 1) * std::size_t(lmax_));
            free_top_.resize(std::size_t(stages_) + 1);
        }
        cand_.reserve(std::size_t(lmax_) * 4);
        ord_.reserve(std::size_t(lmax_) * 4);
        apply_.reserve(std::size_t(lmax_));
        free_slots_.reserve(std::size_t(lmax_));
        alive_slots_.reserve(std::size_t(lmax_));
        order_.reserve(std::size_t(lmax_));
    }

    int capacity() const { return lmax_; }
    PsumLayout layout() const { return layout_; }

    DecodeResult decode(const R* channel, int l, bool select_by_crc) {
        if (l < 1 || l > lmax_ || (l & (l - 1)) != 0)
            throw ConfigError("list size must be a power of two in [1, " +
                              std::to_string(lmax_) + "], got " +
                              std::to_string(l));
        if (select_by_crc && !code_->crc)
            throw ConfigError("CRC-aided selection needs a code with a CRC");
        reset(l);
        std::copy(channel, channel + n_, llr_path(0));
        walk(tree_->root(), 0);
        return finish(select_by_crc);
    }

    // post-decode introspection (diagnostics and tests)
    int alive_count() const { return int(alive_slots_.size()); }
    bool is_alive(int slot) const { return alive_[std::size_t(slot)] != 0; }
    double metric_of(int slot) const { return double(metric_[std::size_t(slot)]); }

private:
    struct Cand {
        R metric;
        std::int32_t slot;
        std::int32_t a; // kind-specific: bit value, or first flip index
        std::int32_t b; // second flip index, -1 if none
    };
    enum class ApplyKind { single_bit, broadcast, flips };

    R* llr_path(int p) { return llr_.data() + std::size_t(p) * 2 * std::size_t(n_); }
    B* hard_path(int p) { return hard_.data() + std::size_t(p) * std::size_t(n_); }

    int seg_size(int d) const { return n_ >> d; }
    std::int32_t& bank_of(int p, int d) {
        return bank_of_[std::size_t(p) * (std::size_t(stages_) + 1) + std::size_t(d)];
    }
    std::int32_t& refcnt(int d, int b) {
        return refcnt_[std::size_t(d) * std::size_t(lmax_) + std::size_t(b)];
    }
    B* bank_seg(int d, int b) {
        return bank_.data() + std::size_t(lmax_) * depth_off_[std::size_t(d)] +
               std::size_t(b) * std::size_t(seg_size(d));
    }
    int pop_free(int d) {
        return free_[std::size_t(d) * std::size_t(lmax_) +
                     std::size_t(--free_top_[std::size_t(d)])];
    }
    void push_free(int d, int b) {
        free_[std::size_t(d) * std::size_t(lmax_) +
              std::size_t(free_top_[std::size_t(d)]++)] = std::int32_t(b);
    }

    const B* ps_read(int p, const TreeNode& nd) {
        if (layout_ == PsumLayout::copy)
            return ps_.data() + std::size_t(p) * std::size_t(n_) + nd.leaf_begin;
        return bank_seg(nd.depth, bank_of(p, nd.depth));
    }

    // Write access to a node's span.  `preserve` keeps existing contents
    // across a copy-on-write clone; pass false when the span is going to be
    // fully rewritten.
    B* ps_write(int p, const TreeNode& nd, bool preserve) {
        if (layout_ == PsumLayout::copy)
            return ps_.data() + std::size_t(p) * std::size_t(n_) + nd.leaf_begin;
        const int d = nd.depth;
        int b = bank_of(p, d);
        if (refcnt(d, b) > 1) {
            --refcnt(d, b);
            const int nb = pop_free(d);
            refcnt(d, nb) = 1;
            bank_of(p, d) = std::int32_t(nb);
            if (preserve)
                std::memcpy(bank_seg(d, nb), bank_seg(d, b),
                            std::size_t(seg_size(d)) * sizeof(B));
            b = nb;
        }
        return bank_seg(d, b);
    }

    void reset(int l) {
        l_ = l;
        std::fill(alive_.begin(), alive_.end(), std::uint8_t(0));
        alive_[0] = 1;
        alive_slots_.assign(1, 0);
        metric_[0] = R(0);
        if (layout_ == PsumLayout::shared) {
            std::fill(refcnt_.begin(), refcnt_.end(), 0);
            for (int d = 0; d <= stages_; ++d) {
                free_top_[std::size_t(d)] = 0;
                for (int b = lmax_ - 1; b >= 0; --b) push_free(d, b);
            }
            for (int d = 0; d <= stages_; ++d) {
                const int b = pop_free(d);
                bank_of(0, d) = std::int32_t(b);
                refcnt(d, b) = 1;
            }
        }
    }

    void walk(int ni, int o) {
        const TreeNode& nd = tree_->node(ni);
        switch (nd.kind) {
        case NodeKind::branch: {
            const int m = nd.size, h = m / 2;
            for (int p : alive_slots_) {
                R* L = llr_path(p) + o;
                f_block(L, L + h, L + m, h);
            }
            walk(nd.left, o + m);
            if (layout_ == PsumLayout::shared) {
                const TreeNode& lc = tree_->node(nd.left);
                for (int p : alive_slots_) {
                    const B* child = ps_read(p, lc);
                    B* par = ps_write(p, nd, false);
                    std::memcpy(par, child, std::size_t(h) * sizeof(B));
                }
            }
            for (int p : alive_slots_) {
                R* L = llr_path(p) + o;
                g_block(L, L + h, ps_read(p, nd), L + m, h);
            }
            walk(nd.right, o + m);
            const TreeNode& rc = tree_->node(nd.right);
            for (int p : alive_slots_) {
                const B* r = ps_read(p, rc);
                B* par = ps_write(p, nd, true);
                h_block(par, r, h);
                if (layout_ == PsumLayout::shared)
                    std::memcpy(par + h, r, std::size_t(h) * sizeof(B));
            }
            break;
        }
        case NodeKind::leaf_frozen:
        case NodeKind::rate_zero:
            step_frozen(nd, o);
            break;
        case NodeKind::leaf_info:
            step_info(nd, o);
            break;
        case NodeKind::rate_one:
            step_rate_one(nd, o);
            break;
        case NodeKind::repetition:
            step_repetition(nd, o);
            break;
        case NodeKind::single_parity:
            step_single_parity(nd, o);
            break;
        }
    }

    // forced decisions: no fork, penalties only
    void step_frozen(const TreeNode& nd, int o) {
        for (int p : alive_slots_) {
            const R* L = llr_path(p) + o;
            R pen{};
            for (int i = 0; i < nd.size; ++i)
                if (L[i] < R(0)) pen = sat_add(pen, R(-L[i]));
            metric_[std::size_t(p)] = sat_add(metric_[std::size_t(p)], pen);
            B* span = ps_write(p, nd, false);
            std::fill(span, span + nd.size, B(0));
        }
        normalize();
    }

    void step_info(const TreeNode& nd, int o) {
        cand_.clear();
        for (int p : alive_slots_) {
            const R v = llr_path(p)[o];
            const R av = abs_llr(v);
            const bool h = hard_bit(v);
            const R base = metric_[std::size_t(p)];
            cand_.push_back({sat_add(base, h ? av : R(0)), p, 0, -1});
            cand_.push_back({sat_add(base, h ? R(0) : av), p, 1, -1});
        }
        fork_apply(nd, ApplyKind::single_bit);
        normalize();
    }

    void step_rate_one(const TreeNode& nd, int o) {
        cand_.clear();
        for (int p : alive_slots_) {
            const R* L = llr_path(p) + o;
            B* hw = hard_path(p);
            for (int i = 0; i < nd.size; ++i) {
                hw[i] = B(hard_bit(L[i]));
                absv_[std::size_t(i)] = abs_llr(L[i]);
            }
            const auto [i1, i2] = select_two_extremes(
                absv_.data(), nd.size, ExtremeMode::two_smallest);
            const R a1 = absv_[std::size_t(i1)], a2 = absv_[std::size_t(i2)];
            const R base = metric_[std::size_t(p)];
            cand_.push_back({base, p, -1, -1});
            cand_.push_back({sat_add(base, a1), p, i1, -1});
            cand_.push_back({sat_add(base, a2), p, i2, -1});
            cand_.push_back({sat_add(base, sat_add(a1, a2)), p, i1, i2});
        }
        fork_apply(nd, ApplyKind::flips);
        normalize();
    }

    void step_repetition(const TreeNode& nd, int o) {
        cand_.clear();
        for (int p : alive_slots_) {
            const R* L = llr_path(p) + o;
            // saturating pairwise fold — the same arithmetic the frozen
            // descent would apply, so the preferred bit matches plain SC
            std::copy(L, L + nd.size, fold_.begin());
            for (int len = nd.size; len > 1; len /= 2) {
                const int h2 = len / 2;
                for (int i = 0; i < h2; ++i)
                    fold_[std::size_t(i)] = sat_add(fold_[std::size_t(i)],
                                                    fold_[std::size_t(i + h2)]);
            }
            const R s = fold_[0];
            const bool w = hard_bit(s);
            R pen_w{};
            for (int i = 0; i < nd.size; ++i) {
                const bool disagree = w ? (L[i] > R(0)) : (L[i] < R(0));
                if (disagree) pen_w = sat_add(pen_w, abs_llr(L[i]));
            }
            const R pen_other = sat_add(pen_w, abs_llr(s));
            const R base = metric_[std::size_t(p)];
            // preferred bit first: guarantees the single-path decode picks
            // the same word as the fold even when both penalties saturate
            cand_.push_back({sat_add(base, pen_w), p, int(w), -1});
            cand_.push_back({sat_add(base, pen_other), p, int(!w), -1});
        }
        fork_apply(nd, ApplyKind::broadcast);
        normalize();
    }

    void step_single_parity(const TreeNode& nd, int o) {
        cand_.clear();
        for (int p : alive_slots_) {
            const R* L = llr_path(p) + o;
            B* hw = hard_path(p);
            B parity = 0;
            for (int i = 0; i < nd.size; ++i) {
                hw[i] = B(hard_bit(L[i]));
                parity = B(parity ^ hw[i]);
                absv_[std::size_t(i)] = abs_llr(L[i]);
            }
            const auto [i1, i2] = select_two_extremes(
                absv_.data(), nd.size, ExtremeMode::two_smallest);
            const R a1 = absv_[std::size_t(i1)], a2 = absv_[std::size_t(i2)];
            const R base = metric_[std::size_t(p)];
            if (parity) {
                // parity already broken: restore it through i1 or i2
                cand_.push_back({sat_add(base, a1), p, i1, -1});
                cand_.push_back({sat_add(base, a2), p, i2, -1});
            } else {
                cand_.push_back({base, p, -1, -1});
                cand_.push_back({sat_add(base, sat_add(a1, a2)), p, i1, i2});
            }
        }
        fork_apply(nd, ApplyKind::flips);
        normalize();
    }

    // Rank all candidates, keep the best l_, kill starved paths, duplicate
    // the rest, then apply decisions and metrics.  Ties resolve by metric,
    // then source path, then emission order — candidate generation iterates
    // alive paths in ascending order, and the insertion sort is stable.
    void fork_apply(const TreeNode& nd, ApplyKind kind) {
        ord_.resize(cand_.size());
        std::iota(ord_.begin(), ord_.end(), 0);
        for (std::size_t i = 1; i < ord_.size(); ++i) {
            const std::int32_t key = ord_[i];
            std::size_t j = i;
            while (j > 0 && cand_[std::size_t(key)].metric <
                                cand_[std::size_t(ord_[j - 1])].metric) {
                ord_[j] = ord_[j - 1];
                --j;
            }
            ord_[j] = key;
        }
        const int keep = std::min<int>(l_, int(cand_.size()));

        std::fill(first_use_.begin(), first_use_.end(), std::int32_t(-1));
        for (int r = 0; r < keep; ++r) {
            const std::int32_t c = ord_[std::size_t(r)];
            const int s = cand_[std::size_t(c)].slot;
            if (first_use_[std::size_t(s)] < 0) first_use_[std::size_t(s)] = c;
        }
        for (int p : alive_slots_)
            if (first_use_[std::size_t(p)] < 0) kill(p);

        free_slots_.clear();
        for (int p = 0; p < lmax_; ++p)
            if (!alive_[std::size_t(p)]) free_slots_.push_back(p);

        apply_.clear();
        std::size_t next_free = 0;
        for (int r = 0; r < keep; ++r) {
            const std::int32_t c = ord_[std::size_t(r)];
            const int src = cand_[std::size_t(c)].slot;
            int target = src;
            if (first_use_[std::size_t(src)] != c) {
                target = free_slots_[next_free++];
                duplicate(src, target, nd);
            }
            apply_.push_back({c, std::int32_t(target)});
        }

        for (const auto& [c, t] : apply_) apply_candidate(nd, c, t, kind);

        std::fill(alive_.begin(), alive_.end(), std::uint8_t(0));
        for (const auto& [c, t] : apply_) alive_[std::size_t(t)] = 1;
        alive_slots_.clear();
        for (int p = 0; p < lmax_; ++p)
            if (alive_[std::size_t(p)]) alive_slots_.push_back(p);
    }

    void kill(int p) {
        alive_[std::size_t(p)] = 0;
        if (layout_ == PsumLayout::shared) {
            for (int d = 0; d <= stages_; ++d) {
                const int b = bank_of(p, d);
                if (--refcnt(d, b) == 0) push_free(d, b);
            }
        }
    }

    // Copy the state a new path still needs: LLR segments of every ancestor
    // whose g-update is pending (we sit in its left subtree), and the
    // already-decided partial sums.
    void duplicate(int src, int dst, const TreeNode& nd) {
        const R* sl = llr_path(src);
        R* dl = llr_path(dst);
        int off = 0;
        for (int d = 0; d < nd.depth; ++d) {
            const int m = n_ >> d;
            if (((nd.leaf_begin >> (stages_ - 1 - d)) & 1) == 0)
                std::copy(sl + off, sl + off + m, dl + off);
            off += m;
        }
        if (layout_ == PsumLayout::copy) {
            const B* sp = ps_.data() + std::size_t(src) * std::size_t(n_);
            B* dp = ps_.data() + std::size_t(dst) * std::size_t(n_);
            std::copy(sp, sp + nd.leaf_begin, dp);
        } else {
            for (int d = 0; d <= stages_; ++d) {
                const std::int32_t b = bank_of(src, d);
                bank_of(dst, d) = b;
                ++refcnt(d, b);
            }
        }
    }

    void apply_candidate(const TreeNode& nd, std::int32_t ci, int target,
                         ApplyKind kind) {
        const Cand& c = cand_[std::size_t(ci)];
        B* span = ps_write(target, nd, false);
        switch (kind) {
        case ApplyKind::single_bit:
            span[0] = B(c.a);
            break;
        case ApplyKind::broadcast:
            std::fill(span, span + nd.size, B(c.a));
            break;
        case ApplyKind::flips: {
            const B* hw = hard_path(c.slot);
            std::copy(hw, hw + nd.size, span);
            if (c.a >= 0) span[c.a] = B(span[c.a] ^ 1);
            if (c.b >= 0) span[c.b] = B(span[c.b] ^ 1);
            break;
        }
        }
        metric_[std::size_t(target)] = c.metric;
    }

    void normalize() {
        if constexpr (llr_traits<R>::fixed_point) {
            R mn = llr_traits<R>::max;
            for (int p : alive_slots_) mn = std::min(mn, metric_[std::size_t(p)]);
            if (mn != R(0))
                for (int p : alive_slots_)
                    metric_[std::size_t(p)] = R(metric_[std::size_t(p)] - mn);
        }
    }

    DecodeResult finish(bool select_by_crc) {
        order_.clear();
        for (int p : alive_slots_) order_.push_back(p);
        for (std::size_t i = 1; i < order_.size(); ++i) {
            const std::int32_t key = order_[i];
            std::size_t j = i;
            while (j > 0 && metric_[std::size_t(key)] <
                                metric_[std::size_t(order_[j - 1])]) {
                order_[j] = order_[j - 1];
                --j;
            }
            order_[j] = key;
        }

        const TreeNode& root = tree_->node(tree_->root());
        const std::size_t psize = std::size_t(code_->payload_size());
        int pick = order_[0];
        bool crc_ok = false;
        BitVector payload(psize);
        if (code_->crc && select_by_crc) {
            for (int p : order_) {
                extract_payload(*tree_, ps_read(p, root), payload);
                if (code_->crc->check(payload)) {
                    pick = p;
                    crc_ok = true;
                    break;
                }
            }
        }
        if (!crc_ok) {
            pick = order_[0];
            extract_payload(*tree_, ps_read(pick, root), payload);
            if (code_->crc) crc_ok = code_->crc->check(payload);
        }

        DecodeResult res;
        res.payload = std::move(payload);
        res.crc_ok = crc_ok;
        res.escalation_level = l_;
        res.metric = double(metric_[std::size_t(pick)]);
        const B* cw = ps_read(pick, root);
        res.codeword = BitVector(std::size_t(n_));
        for (int i = 0; i < n_; ++i)
            res.codeword.set(std::size_t(i), cw[i] != 0);
        return res;
    }

    const PolarCode* code_;
    const PruneTree* tree_;
    int n_, stages_, lmax_;
    PsumLayout layout_;
    int l_ = 1;

    std::vector<R> llr_;
    std::vector<R> metric_;
    std::vector<std::uint8_t> alive_;
    std::vector<std::int32_t> alive_slots_;
    std::vector<B> ps_; // copy layout

    std::vector<B> bank_; // shared layout
    std::vector<std::size_t> depth_off_;
    std::vector<std::int32_t> bank_of_;
    std::vector<std::int32_t> refcnt_;
    std::vector<std::int32_t> free_;
    std::vector<std::int32_t> free_top_;

    std::vector<B> hard_;
    std::vector<R> fold_;
    std::vector<R> absv_;
    std::vector<Cand> cand_;
    std::vector<std::int32_t> ord_;
    std::vector<std::pair<std::int32_t, std::int32_t>> apply_;
    std::vector<std::int32_t> first_use_;
    std::vector<std::int32_t> free_slots_;
    std::vector<std::int32_t> order_;
};

} // namespace polar
