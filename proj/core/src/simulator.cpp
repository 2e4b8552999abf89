#include "treesched/simulator.hpp"

#include <algorithm>
#include <map>

namespace treesched {

std::vector<Violation> check_feasible(const TaskTree& tree, const Schedule& sched) {
    std::vector<Violation> violations;
    const int n = tree.size();
    if (static_cast<int>(sched.start.size()) != n || static_cast<int>(sched.proc.size()) != n) {
        violations.push_back({"schedule does not cover the tree", 0, 0});
        return violations;
    }
    for (NodeId id = 1; id <= n; ++id) {
        if (sched.proc_of(id) < 1 || sched.proc_of(id) > sched.processors)
            violations.push_back({"processor id out of range", id, sched.start_of(id)});
        if (sched.start_of(id) < 0)
            violations.push_back({"negative start time", id, sched.start_of(id)});
        for (NodeId c : tree.children(id)) {
            if (sched.start_of(id) < sched.finish_of(c, tree))
                violations.push_back({"starts before child " + std::to_string(c) + " completes",
                                      id, sched.start_of(id)});
        }
    }
    // Per-processor overlap: sort by start, check successive intervals.
    std::vector<std::vector<NodeId>> by_proc(sched.processors + 1);
    for (NodeId id = 1; id <= n; ++id) {
        const int p = sched.proc_of(id);
        if (p >= 1 && p <= sched.processors) by_proc[p].push_back(id);
    }
    for (int p = 1; p <= sched.processors; ++p) {
        std::vector<NodeId>& ids = by_proc[p];
        std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
            if (sched.start_of(a) != sched.start_of(b)) return sched.start_of(a) < sched.start_of(b);
            return a < b;
        });
        TimeUnits busy_until = 0;
        NodeId prev = 0;
        for (NodeId id : ids) {
            if (prev != 0 && sched.start_of(id) < busy_until && tree.node(id).w > 0)
                violations.push_back({"overlaps node " + std::to_string(prev) +
                                          " on processor " + std::to_string(p),
                                      id, sched.start_of(id)});
            if (sched.finish_of(id, tree) > busy_until) {
                busy_until = sched.finish_of(id, tree);
                prev = id;
            }
        }
    }
    return violations;
}

EvalReport evaluate(const TaskTree& tree, const Schedule& sched) {
    const std::vector<Violation> violations = check_feasible(tree, sched);
    if (!violations.empty())
        throw std::invalid_argument("infeasible schedule: " + violations.front().what +
                                    " (node " + std::to_string(violations.front().node) + ")");

    const int n = tree.size();
    // Group node starts and finishes by time. Zero-duration nodes are handled
    // apart: they never occupy an interval, but their instantaneous demand
    // (inputs + n + f) still counts toward the peak.
    std::map<TimeUnits, std::vector<NodeId>> finishes, starts, blips;
    for (NodeId id = 1; id <= n; ++id) {
        if (tree.node(id).w > 0) {
            starts[sched.start_of(id)].push_back(id);
            finishes[sched.finish_of(id, tree)].push_back(id);
        } else {
            blips[sched.start_of(id)].push_back(id);
        }
    }
    std::vector<TimeUnits> event_times;
    for (const auto& [t, _] : finishes) event_times.push_back(t);
    for (const auto& [t, _] : starts) event_times.push_back(t);
    for (const auto& [t, _] : blips) event_times.push_back(t);
    std::sort(event_times.begin(), event_times.end());
    event_times.erase(std::unique(event_times.begin(), event_times.end()), event_times.end());

    // Zero-duration nodes at one instant fire children before parents so a
    // chain of them completes in cascade; ties break by id.
    std::vector<int> sub_depth(n + 1, 0);
    {
        std::vector<NodeId> topo;
        topo.reserve(n);
        std::vector<NodeId> stack{tree.root()};
        while (!stack.empty()) {
            NodeId id = stack.back();
            stack.pop_back();
            topo.push_back(id);
            for (NodeId c : tree.children(id)) stack.push_back(c);
        }
        for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
            int d = 0;
            for (NodeId c : tree.children(*it)) d = std::max(d, sub_depth[c] + 1);
            sub_depth[*it] = d;
        }
    }

    EvalReport report;
    MemUnits memory = 0;  // resident outputs + running (n + f)
    MemUnits peak = 0;

    auto complete = [&](NodeId id) {
        // Inputs and the execution file go away, the output stays.
        memory -= tree.inputs(id);
        memory += tree.node(id).f;
    };

    for (TimeUnits t : event_times) {
        if (auto it = finishes.find(t); it != finishes.end()) {
            for (NodeId id : it->second) {
                const NodeRecord& r = tree.node(id);
                memory -= r.n + r.f;  // no longer running
                complete(id);
            }
        }
        if (auto it = blips.find(t); it != blips.end()) {
            std::vector<NodeId>& ids = it->second;
            std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
                if (sub_depth[a] != sub_depth[b]) return sub_depth[a] < sub_depth[b];
                return a < b;
            });
            for (NodeId id : ids) {
                const NodeRecord& r = tree.node(id);
                peak = std::max(peak, memory + r.n + r.f);
                complete(id);
            }
        }
        if (auto it = starts.find(t); it != starts.end()) {
            for (NodeId id : it->second) {
                const NodeRecord& r = tree.node(id);
                memory += r.n + r.f;
            }
        }
        peak = std::max(peak, memory);
        report.trace.push_back({t, memory});
    }

    report.makespan = sched.makespan(tree);
    report.peak_memory = peak;
    return report;
}

Schedule schedule_from_order(const TaskTree& tree, const NodeOrder& order) {
    if (order.size() != tree.size())
        throw std::invalid_argument("order does not cover the tree");
    Schedule sched(1, tree.size());
    TimeUnits t = 0;
    for (NodeId id : order.sequence) {
        sched.assign(id, t, 1);
        t += tree.node(id).w;
    }
    return sched;
}

}  // namespace treesched
