#pragma once

#include <vector>

#include "treesched/tree.hpp"

namespace treesched {

/// A total priority order over the nodes of a tree. rank maps node id to a
/// position in 1..n; smaller rank means earlier / higher priority.
struct NodeOrder {
    enum class Kind { Postorder, DeepestFirst, Custom };

    Kind kind = Kind::Custom;
    std::vector<int> rank;          // index id-1, values 1..n
    std::vector<NodeId> sequence;   // sequence[r-1] = node with rank r

    static NodeOrder from_sequence(Kind kind, std::vector<NodeId> seq);

    int rank_of(NodeId id) const { return rank[id - 1]; }
    int size() const { return static_cast<int>(sequence.size()); }
};

/// True when every node's rank exceeds the ranks of all its descendants and
/// each subtree's ranks form a contiguous interval.
bool is_postorder(const TaskTree& tree, const NodeOrder& order);

struct PostorderResult {
    NodeOrder order;
    MemUnits peak = 0;
};

/// Memory-minimizing postorder traversal: children are visited by
/// non-increasing (subtree peak - output size), ties broken by smaller id.
/// Returns the order together with its exact sequential peak memory.
PostorderResult optimal_postorder(const TaskTree& tree);

/// Same, restricted to the subtree rooted at `root`; the returned sequence
/// contains only that subtree's node ids.
struct SubtreePostorder {
    std::vector<NodeId> sequence;
    MemUnits peak = 0;
};
SubtreePostorder optimal_postorder_subtree(const TaskTree& tree, NodeId root);

/// Exact peak memory of the one-processor execution following `order`.
/// Throws std::invalid_argument if the order is not topological.
MemUnits sequential_peak(const TaskTree& tree, const NodeOrder& order);

/// Minimum sequential peak over all topological orders, by exhaustive
/// enumeration with memoization. Guarded to trees of at most 12 nodes.
MemUnits brute_force_min_peak(const TaskTree& tree);

}  // namespace treesched
