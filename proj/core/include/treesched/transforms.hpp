#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "treesched/schedule.hpp"
#include "treesched/tree.hpp"

namespace treesched {

/// Bookkeeping for a tree transformation that only adds leaves. Retained
/// nodes keep their ids, added leaves take ids original_size+1 and up, so
/// origin is the identity on retained nodes.
struct TransformMap {
    int original_size = 0;
    int transformed_size = 0;
    std::vector<NodeId> added_nodes;  // ids in the transformed tree

    bool is_added(NodeId transformed_id) const { return transformed_id > original_size; }
    /// Original node id for a retained node, 0 for an added one.
    NodeId origin(NodeId transformed_id) const {
        return is_added(transformed_id) ? 0 : transformed_id;
    }

    /// Map for `first` followed by `second` applied to its result.
    static TransformMap compose(const TransformMap& first, const TransformMap& second);
};

struct TransformResult {
    TaskTree tree;
    TransformMap map;
};

/// Replaces every execution file by a zero-work leaf child carrying its
/// size, leaving a tree with n = 0 everywhere and identical memory behavior.
TransformResult eliminate_execution_files(const TaskTree& tree);

/// Adds a leaf child of size max(0, f - inputs) under every inner node that
/// outgrows its inputs, so that the result is a reduction tree. Requires a
/// tree with n = 0 everywhere (run eliminate_execution_files first).
TransformResult to_reduction_tree(const TaskTree& tree);

/// True when every inner node's output is at most the sum of its inputs.
bool is_reduction_tree(const TaskTree& tree);

/// Drops the added leaves from a schedule on the transformed tree. Retained
/// nodes keep their start times and processors; the makespan is unchanged
/// and the peak memory never grows.
Schedule lift_schedule(const Schedule& sched, const TransformMap& map);

/// Two-column text form `<transformed-id> <original-id>` (0 for added).
std::string serialize_transform_map(const TransformMap& map);
TransformMap parse_transform_map(std::string_view text);

}  // namespace treesched
