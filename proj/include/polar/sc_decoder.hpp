#pragma once

#include <algorithm>
#include <vector>

#include "polar/code.hpp"
#include "polar/errors.hpp"
#include "polar/llr.hpp"
#include "polar/prune_tree.hpp"

namespace polar {

// Successive-cancellation decoder over one LLR representation.  The decode
// tree drives everything: an unpruned tree gives textbook bit-by-bit
// decoding, a pruned tree short-cuts constant, rate-1, repetition and
// single-parity subtrees with bit-identical decisions.
//
// LLR storage is one flat buffer of 2n values: the root segment occupies
// [0, n) and each depth d+1 segment starts one full depth-d segment after
// its parent, so all nodes of a depth share their slot.
template <class R>
class ScDecoder {
public:
    using B = typename llr_traits<R>::bit_type;

    ScDecoder(const PolarCode& code, const PruneTree& tree)
        : code_(&code), tree_(&tree),
          llr_(2 * static_cast<std::size_t>(code.n)),
          ps_(static_cast<std::size_t>(code.n)),
          fold_(static_cast<std::size_t>(code.n)) {
        if (tree.n() != code.n)
            throw ConfigError("decode tree is sized for N = " +
                              std::to_string(tree.n()) + ", code has N = " +
                              std::to_string(code.n));
    }

    void decode(const R* channel) {
        std::copy(channel, channel + code_->n, llr_.begin());
        walk(tree_->root(), 0);
    }

    const B* codeword() const { return ps_.data(); }

    BitVector codeword_bits() const {
        BitVector x(static_cast<std::size_t>(code_->n));
        for (int i = 0; i < code_->n; ++i)
            x.set(std::size_t(i), ps_[std::size_t(i)] != 0);
        return x;
    }

    BitVector payload() const {
        BitVector out(static_cast<std::size_t>(code_->payload_size()));
        extract_payload(*tree_, ps_.data(), out);
        return out;
    }

private:
    void walk(int ni, int o) {
        const TreeNode& nd = tree_->node(ni);
        const int m = nd.size;
        B* ps = ps_.data() + nd.leaf_begin;
        R* L = llr_.data() + o;
        switch (nd.kind) {
        case NodeKind::branch: {
            const int h = m / 2;
            f_block(L, L + h, L + m, h);
            walk(nd.left, o + m);
            g_block(L, L + h, ps, L + m, h);
            walk(nd.right, o + m);
            h_block(ps, ps + h, h);
            break;
        }
        case NodeKind::leaf_frozen:
            ps[0] = 0;
            break;
        case NodeKind::leaf_info:
            ps[0] = B(hard_bit(L[0]));
            break;
        case NodeKind::rate_zero:
            std::fill(ps, ps + m, B(0));
            break;
        case NodeKind::rate_one:
            walk_subtree(o, nd.leaf_begin, m, -1);
            break;
        case NodeKind::repetition: {
            const B w = B(hard_bit(fold_llr(L, m)));
            std::fill(ps, ps + m, w);
            break;
        }
        case NodeKind::single_parity:
            walk_subtree(o, nd.leaf_begin, m, nd.leaf_begin);
            break;
        }
    }

    // Unabridged recursion over a subtree with at most one frozen position:
    // rate-1 and single-parity nodes decode exactly as if never pruned, so
    // zero LLRs and tied magnitudes come out the same as in the full tree.
    void walk_subtree(int o, int base, int m, int frozen_at) {
        B* ps = ps_.data() + base;
        R* L = llr_.data() + o;
        if (m == 1) {
            ps[0] = base == frozen_at ? B(0) : B(hard_bit(L[0]));
            return;
        }
        const int h = m / 2;
        f_block(L, L + h, L + m, h);
        walk_subtree(o + m, base, h, frozen_at);
        g_block(L, L + h, ps, L + m, h);
        walk_subtree(o + m, base + h, h, frozen_at);
        h_block(ps, ps + h, h);
    }

    // Saturating pairwise reduction; mirrors the g-updates a frozen-only
    // descent would apply, so repetition stays bit-exact in fixed point.
    R fold_llr(const R* L, int m) {
        std::copy(L, L + m, fold_.begin());
        for (int len = m; len > 1; len /= 2) {
            const int h = len / 2;
            for (int i = 0; i < h; ++i)
                fold_[std::size_t(i)] =
                    sat_add(fold_[std::size_t(i)], fold_[std::size_t(i + h)]);
        }
        return fold_[0];
    }

    const PolarCode* code_;
    const PruneTree* tree_;
    std::vector<R> llr_;
    std::vector<B> ps_;
    std::vector<R> fold_;
};

} // namespace polar
