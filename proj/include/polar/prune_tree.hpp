#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polar/bit_vector.hpp"

namespace polar {

enum class NodeKind : std::uint8_t {
    branch,
    leaf_frozen,
    leaf_info,
    rate_zero, // all-frozen subtree
    rate_one,  // all-information subtree
    repetition, // frozen except the last position
    single_parity, // frozen only in the first position
};

const char* node_kind_name(NodeKind k);

// Which subtree shapes may be cut short, and up to which size.  A size cap of
// zero means unlimited.
struct PruningConfig {
    bool rate_zero = true;
    bool rate_one = true;
    bool repetition = true;
    bool single_parity = true;
    int rep_max = 0;
    int spc_max = 4;

    static PruningConfig none() { return {false, false, false, false, 0, 0}; }
};

struct TreeNode {
    NodeKind kind;
    std::int16_t depth;
    std::int32_t leaf_begin; // first covered code position
    std::int32_t size;       // covered positions, a power of two
    std::int32_t left = -1;
    std::int32_t right = -1;
};

// Decode tree for a frozen mask: subtrees matching an enabled pattern become
// single nodes.  Recognition precedence is repetition, then single-parity,
// then rate-0, then rate-1; sub-patterns shadowed by a disabled rule fall
// through to the next one that matches.
class PruneTree {
public:
    PruneTree(const BitVector& frozen, const PruningConfig& cfg);

    int n() const { return n_; }
    int stages() const { return stages_; }
    int root() const { return 0; }
    const TreeNode& node(int i) const { return nodes_[std::size_t(i)]; }
    std::size_t node_count() const { return nodes_.size(); }

    struct HistogramRow {
        NodeKind kind;
        std::int32_t size;
        std::int32_t count;
    };
    std::vector<HistogramRow> histogram() const;

private:
    int build(std::int32_t lo, std::int32_t size, int depth,
              const BitVector& frozen, const PruningConfig& cfg);

    int n_ = 0;
    int stages_ = 0;
    std::vector<TreeNode> nodes_;
};

// Decisions for the covered positions of every pruned node, gathered in
// ascending position order; equals a plain gather of the non-frozen
// positions of the full decision word.
template <class B>
void extract_payload(const PruneTree& tree, const B* decision, BitVector& out) {
    std::size_t w = 0;
    // nodes_ is laid out preorder with left before right, so a linear sweep
    // visits covered positions in ascending order
    for (std::size_t idx = 0; idx < tree.node_count(); ++idx) {
        const TreeNode& nd = tree.node(int(idx));
        const B* d = decision + nd.leaf_begin;
        switch (nd.kind) {
        case NodeKind::branch:
        case NodeKind::leaf_frozen:
        case NodeKind::rate_zero:
            break;
        case NodeKind::leaf_info:
            out.set(w++, d[0] != 0);
            break;
        case NodeKind::rate_one:
            for (std::int32_t i = 0; i < nd.size; ++i) out.set(w++, d[i] != 0);
            break;
        case NodeKind::repetition:
            out.set(w++, d[nd.size - 1] != 0);
            break;
        case NodeKind::single_parity:
            for (std::int32_t i = 1; i < nd.size; ++i) out.set(w++, d[i] != 0);
            break;
        }
    }
}

} // namespace polar
