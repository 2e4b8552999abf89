#pragma once

#include <vector>

#include "treesched/schedule.hpp"
#include "treesched/sequential.hpp"
#include "treesched/tree.hpp"

namespace treesched {

/// Raised by the memory-limited engines when no node runs, the queue is
/// nonempty and its head cannot be admitted: the memory limit is below the
/// requirement of the chosen node order.
class MemoryLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result of the subtree-splitting search: the tree is cut into disjoint
/// maximal subtrees (parallel + surplus roots) plus the popped sequential
/// nodes. step_makespans[s] is the estimated makespan of the splitting after
/// s pops; chosen_rank indexes the selected one.
struct Splitting {
    std::vector<NodeId> parallel_roots;  // at most p, by non-increasing subtree weight
    std::vector<NodeId> surplus_roots;   // remaining queue entries, same order
    std::vector<NodeId> seq_set;         // nodes split away, in pop order
    std::vector<TimeUnits> step_makespans;
    int chosen_rank = 0;
};

/// Splits the tree by repeatedly cutting the heaviest subtree and keeps the
/// splitting whose estimated makespan is minimal (ties toward fewer cuts).
/// Queue order: non-increasing subtree weight, then non-increasing own work,
/// then smaller id.
Splitting split_subtrees(const TaskTree& tree, int p);

/// Processes the chosen subtrees in parallel (each via its own optimal
/// postorder) and the remaining nodes sequentially afterwards. With `optim`
/// every subtree of the splitting is packed LPT-style onto the p processors.
Schedule par_subtrees(const TaskTree& tree, int p, bool optim = false);

/// Priority for the list scheduler: all inner nodes first (mutually by
/// optimal-postorder rank), then the leaves in optimal-postorder rank.
NodeOrder order_inner_first(const TaskTree& tree);

/// Priority by (depth descending, inner before leaf, postorder rank).
NodeOrder order_deepest_first(const TaskTree& tree);

/// Event-driven work-conserving list scheduling: whenever a processor is
/// free and a node is ready, the highest-priority ready node starts.
Schedule list_schedule(const TaskTree& tree, int p, const NodeOrder& order);

/// Pseudo list scheduling under a memory limit: inner nodes are always
/// admitted, a leaf only if the accounted memory stays within M; on refusal
/// assignment stops until the next event. With `optim` the leaf test skips
/// the outputs of running inner nodes, admitting more leaves under the same
/// doubled-limit guarantee. Requires a reduction tree with n = 0
/// everywhere. Throws MemoryLimitError on deadlock.
Schedule list_schedule_mem_limit(const TaskTree& tree, int p, const NodeOrder& order, MemUnits M,
                                 bool optim = false);

/// Memory each child books for its parent's output, per the given postorder
/// (children of a node settled in decreasing postorder rank). On a reduction
/// tree the contributions of the children of i sum to f_i exactly.
std::vector<MemUnits> compute_contribs(const TaskTree& tree, const NodeOrder& postorder);

/// Booking scheduler: keeps the true memory use within M (strict) by
/// reserving space for parents ahead of time. Requires a reduction tree with
/// n = 0 and M at least the sequential peak of the postorder; rejected up
/// front otherwise.
Schedule mem_booking_inner_first(const TaskTree& tree, int p, const NodeOrder& postorder,
                                 MemUnits M);

}  // namespace treesched
