#include "polar/prune_tree.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "polar/errors.hpp"

namespace polar {

const char* node_kind_name(NodeKind k) {
    switch (k) {
    case NodeKind::branch: return "branch";
    case NodeKind::leaf_frozen: return "frozen";
    case NodeKind::leaf_info: return "info";
    case NodeKind::rate_zero: return "R0";
    case NodeKind::rate_one: return "R1";
    case NodeKind::repetition: return "REP";
    case NodeKind::single_parity: return "SPC";
    }
    return "?";
}

PruneTree::PruneTree(const BitVector& frozen, const PruningConfig& cfg) {
    n_ = int(frozen.size());
    if (n_ < 2 || (n_ & (n_ - 1)) != 0)
        throw ConfigError("decode tree needs a power-of-two block length, got " +
                          std::to_string(n_));
    if (cfg.rep_max < 0 || cfg.spc_max < 0 ||
        (cfg.rep_max && cfg.rep_max < 2) || (cfg.spc_max && cfg.spc_max < 4))
        throw ConfigError("node size caps must be 0 (unlimited), >= 2 for "
                          "repetition and >= 4 for single-parity");
    stages_ = std::countr_zero(unsigned(n_));
    nodes_.reserve(std::size_t(2 * n_ - 1));
    build(0, n_, 0, frozen, cfg);
}

int PruneTree::build(std::int32_t lo, std::int32_t size, int depth,
                     const BitVector& frozen, const PruningConfig& cfg) {
    const int idx = int(nodes_.size());
    nodes_.push_back(TreeNode{NodeKind::branch, std::int16_t(depth), lo, size});

    std::int32_t nfrozen = 0;
    for (std::int32_t i = 0; i < size; ++i)
        nfrozen += frozen.get(std::size_t(lo + i));

    NodeKind kind = NodeKind::branch;
    if (size == 1) {
        kind = nfrozen ? NodeKind::leaf_frozen : NodeKind::leaf_info;
    } else if (cfg.repetition && nfrozen == size - 1 &&
               !frozen.get(std::size_t(lo + size - 1)) &&
               (cfg.rep_max == 0 || size <= cfg.rep_max)) {
        kind = NodeKind::repetition;
    } else if (cfg.single_parity && nfrozen == 1 && frozen.get(std::size_t(lo)) &&
               (cfg.spc_max == 0 || size <= cfg.spc_max)) {
        kind = NodeKind::single_parity;
    } else if (cfg.rate_zero && nfrozen == size) {
        kind = NodeKind::rate_zero;
    } else if (cfg.rate_one && nfrozen == 0) {
        kind = NodeKind::rate_one;
    }

    nodes_[std::size_t(idx)].kind = kind;
    if (kind == NodeKind::branch && size > 1) {
        const int l = build(lo, size / 2, depth + 1, frozen, cfg);
        const int r = build(lo + size / 2, size / 2, depth + 1, frozen, cfg);
        nodes_[std::size_t(idx)].left = std::int32_t(l);
        nodes_[std::size_t(idx)].right = std::int32_t(r);
    }
    return idx;
}

std::vector<PruneTree::HistogramRow> PruneTree::histogram() const {
    std::map<std::pair<int, std::int32_t>, std::int32_t> acc;
    for (const auto& nd : nodes_) ++acc[{int(nd.kind), nd.size}];
    std::vector<HistogramRow> rows;
    rows.reserve(acc.size());
    for (const auto& [key, count] : acc)
        rows.push_back({NodeKind(key.first), key.second, count});
    return rows;
}

} // namespace polar
