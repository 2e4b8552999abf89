#include "treesched/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace treesched {

std::string Rational::to_string() const {
    const std::int64_t whole = num / den;
    std::int64_t rem = num % den;
    std::string out = std::to_string(whole);
    out += '.';
    for (int i = 0; i < 6; ++i) {
        rem *= 10;
        out += static_cast<char>('0' + rem / den);
        rem %= den;
    }
    return out;
}

std::vector<TimeUnits> depths(const TaskTree& tree) {
    std::vector<TimeUnits> depth(tree.size(), 0);
    std::vector<NodeId> stack{tree.root()};
    depth[tree.root() - 1] = tree.node(tree.root()).w;
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        for (NodeId c : tree.children(id)) {
            depth[c - 1] = depth[id - 1] + tree.node(c).w;
            stack.push_back(c);
        }
    }
    return depth;
}

Rational makespan_lower_bound(const TaskTree& tree, int p) {
    if (p < 1) throw std::invalid_argument("processor count must be >= 1");
    const std::vector<TimeUnits> d = depths(tree);
    const TimeUnits critical = *std::max_element(d.begin(), d.end());
    const Rational work{tree.total_work(), p};
    const Rational cp{critical, 1};
    return work < cp ? cp : work;
}

MemUnits memory_makespan_product_bound(const TaskTree& tree) {
    MemUnits sum = 0;
    for (NodeId id = 1; id <= tree.size(); ++id)
        sum += tree.node_memory(id) * tree.node(id).w;
    return sum;
}

BoundsReport compute_bounds(const TaskTree& tree, int p) {
    if (p < 1) throw std::invalid_argument("processor count must be >= 1");
    BoundsReport report;
    const std::vector<TimeUnits> d = depths(tree);
    report.critical_path = *std::max_element(d.begin(), d.end());
    report.work_over_p = Rational{tree.total_work(), p};
    const Rational cp{report.critical_path, 1};
    report.makespan_lb = report.work_over_p < cp ? cp : report.work_over_p;
    report.mem_time_product_lb = memory_makespan_product_bound(tree);
    return report;
}

}  // namespace treesched
