#pragma once

#include <vector>

#include "treesched/tree.hpp"

namespace treesched {

/// Start time and processor assignment per node. Feasibility (precedence,
/// non-overlap) is checked by the simulator, not enforced here.
struct Schedule {
    int processors = 0;
    std::vector<TimeUnits> start;  // index id-1
    std::vector<int> proc;         // 1..processors, index id-1

    Schedule() = default;
    Schedule(int p, int n) : processors(p), start(n, 0), proc(n, 0) {}

    TimeUnits start_of(NodeId id) const { return start[id - 1]; }
    int proc_of(NodeId id) const { return proc[id - 1]; }
    void assign(NodeId id, TimeUnits t, int p) {
        start[id - 1] = t;
        proc[id - 1] = p;
    }

    TimeUnits finish_of(NodeId id, const TaskTree& tree) const {
        return start[id - 1] + tree.node(id).w;
    }

    TimeUnits makespan(const TaskTree& tree) const {
        TimeUnits m = 0;
        for (NodeId id = 1; id <= tree.size(); ++id)
            m = std::max(m, finish_of(id, tree));
        return m;
    }

    bool operator==(const Schedule& other) const = default;
};

}  // namespace treesched
