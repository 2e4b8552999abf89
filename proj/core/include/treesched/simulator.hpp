#pragma once

#include <string>
#include <vector>

#include "treesched/schedule.hpp"
#include "treesched/sequential.hpp"
#include "treesched/tree.hpp"

namespace treesched {

struct TracePoint {
    TimeUnits time = 0;
    MemUnits memory = 0;
};

/// Exact evaluation of a (tree, schedule) pair: memory is piecewise constant
/// between events; the trace records the value after all events at each
/// instant. Normalized fields are filled by the bench layer.
struct EvalReport {
    TimeUnits makespan = 0;
    MemUnits peak_memory = 0;
    std::vector<TracePoint> trace;
    double normalized_makespan = 0.0;
    double normalized_memory = 0.0;
};

struct Violation {
    std::string what;
    NodeId node = 0;
    TimeUnits at = 0;
};

/// Verifies precedence, per-processor non-overlap and processor id ranges.
/// Returns an empty list when the schedule is feasible.
std::vector<Violation> check_feasible(const TaskTree& tree, const Schedule& sched);

/// Exact event-driven evaluation under the tree memory model: a running node
/// holds its inputs, execution file and output file; outputs stay resident
/// until the parent completes. At equal timestamps all finishes apply before
/// all starts. Throws std::invalid_argument on an infeasible schedule.
EvalReport evaluate(const TaskTree& tree, const Schedule& sched);

/// One-processor schedule executing the nodes back to back in `order`.
Schedule schedule_from_order(const TaskTree& tree, const NodeOrder& order);

}  // namespace treesched
