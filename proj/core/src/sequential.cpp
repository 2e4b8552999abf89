#include "treesched/sequential.hpp"

#include <algorithm>
#include <unordered_map>

namespace treesched {

NodeOrder NodeOrder::from_sequence(Kind kind, std::vector<NodeId> seq) {
    NodeOrder order;
    order.kind = kind;
    order.sequence = std::move(seq);
    order.rank.assign(order.sequence.size(), 0);
    for (std::size_t r = 0; r < order.sequence.size(); ++r)
        order.rank[order.sequence[r] - 1] = static_cast<int>(r + 1);
    return order;
}

bool is_postorder(const TaskTree& tree, const NodeOrder& order) {
    if (order.size() != tree.size()) return false;
    // min/max rank over each subtree, bottom-up along the sequence.
    std::vector<int> min_rank(tree.size() + 1), max_rank(tree.size() + 1), sub_size(tree.size() + 1);
    for (NodeId id : order.sequence) {
        int lo = order.rank_of(id), hi = order.rank_of(id), sz = 1;
        for (NodeId c : tree.children(id)) {
            if (order.rank_of(c) > order.rank_of(id)) return false;
            lo = std::min(lo, min_rank[c]);
            hi = std::max(hi, max_rank[c]);
            sz += sub_size[c];
        }
        if (hi != order.rank_of(id) || hi - lo + 1 != sz) return false;
        min_rank[id] = lo;
        max_rank[id] = hi;
        sub_size[id] = sz;
    }
    return true;
}

namespace {

// Iterative bottom-up pass over a subtree: returns node ids with children
// before parents (arbitrary sibling order).
std::vector<NodeId> topo_of_subtree(const TaskTree& tree, NodeId root) {
    std::vector<NodeId> stack{root};
    std::vector<NodeId> out;
    out.reserve(16);
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        out.push_back(id);
        for (NodeId c : tree.children(id)) stack.push_back(c);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

SubtreePostorder optimal_postorder_subtree(const TaskTree& tree, NodeId root) {
    const std::vector<NodeId> topo = topo_of_subtree(tree, root);

    // Liu's recurrence: peak[i] = max(node_memory(i), max_t(peak[c_t] + sum
    // of f over children visited before c_t)) with children sorted by
    // non-increasing (peak - f).
    std::vector<MemUnits> peak(tree.size() + 1, 0);
    std::vector<std::vector<NodeId>> visit_order(tree.size() + 1);
    for (NodeId id : topo) {
        const NodeRecord& r = tree.node(id);
        if (r.children.empty()) {
            peak[id] = r.n + r.f;
            continue;
        }
        std::vector<NodeId> kids = r.children;
        std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
            const MemUnits da = peak[a] - tree.node(a).f;
            const MemUnits db = peak[b] - tree.node(b).f;
            if (da != db) return da > db;
            return a < b;
        });
        MemUnits best = tree.node_memory(id);
        MemUnits resident = 0;
        for (NodeId c : kids) {
            best = std::max(best, resident + peak[c]);
            resident += tree.node(c).f;
        }
        peak[id] = best;
        visit_order[id] = std::move(kids);
    }

    // Emit the traversal following the sorted child order.
    SubtreePostorder result;
    result.peak = peak[root];
    result.sequence.reserve(topo.size());
    struct Frame {
        NodeId id;
        std::size_t next = 0;
    };
    std::vector<Frame> stack{{root}};
    while (!stack.empty()) {
        Frame& fr = stack.back();
        const std::vector<NodeId>& kids = visit_order[fr.id];
        if (fr.next < kids.size()) {
            stack.push_back({kids[fr.next++]});
        } else {
            result.sequence.push_back(fr.id);
            stack.pop_back();
        }
    }
    return result;
}

PostorderResult optimal_postorder(const TaskTree& tree) {
    SubtreePostorder sub = optimal_postorder_subtree(tree, tree.root());
    PostorderResult result;
    result.peak = sub.peak;
    result.order = NodeOrder::from_sequence(NodeOrder::Kind::Postorder, std::move(sub.sequence));
    return result;
}

MemUnits sequential_peak(const TaskTree& tree, const NodeOrder& order) {
    if (order.size() != tree.size())
        throw std::invalid_argument("order does not cover the tree");
    std::vector<bool> done(tree.size() + 1, false);
    MemUnits resident = 0;
    MemUnits peak = 0;
    for (NodeId id : order.sequence) {
        for (NodeId c : tree.children(id))
            if (!done[c])
                throw std::invalid_argument("order is not topological: node " +
                                            std::to_string(id) + " before child " +
                                            std::to_string(c));
        const NodeRecord& r = tree.node(id);
        peak = std::max(peak, resident + r.n + r.f);
        resident += r.f - tree.inputs(id);
        done[id] = true;
    }
    return peak;
}

MemUnits brute_force_min_peak(const TaskTree& tree) {
    const int n = tree.size();
    if (n > 12) throw std::invalid_argument("brute_force_min_peak is limited to 12 nodes");

    // h(mask) = minimal achievable peak of the remaining execution, given
    // the set of completed nodes. Memory resident at a state is determined
    // by the mask alone.
    std::unordered_map<std::uint32_t, MemUnits> memo;
    const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1);

    auto resident_of = [&](std::uint32_t mask) {
        MemUnits m = 0;
        for (NodeId id = 1; id <= n; ++id) {
            if (!(mask & (1u << (id - 1)))) continue;
            NodeId p = tree.parent(id);
            if (p == 0 || !(mask & (1u << (p - 1)))) m += tree.node(id).f;
        }
        return m;
    };

    auto solve = [&](auto&& self, std::uint32_t mask) -> MemUnits {
        if (mask == full) return 0;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        const MemUnits resident = resident_of(mask);
        MemUnits best = -1;
        for (NodeId id = 1; id <= n; ++id) {
            if (mask & (1u << (id - 1))) continue;
            bool ready = true;
            for (NodeId c : tree.children(id))
                if (!(mask & (1u << (c - 1)))) {
                    ready = false;
                    break;
                }
            if (!ready) continue;
            const NodeRecord& r = tree.node(id);
            const MemUnits here = resident + r.n + r.f;
            const MemUnits rest = self(self, mask | (1u << (id - 1)));
            const MemUnits peak = std::max(here, rest);
            if (best < 0 || peak < best) best = peak;
        }
        memo.emplace(mask, best);
        return best;
    };
    return solve(solve, 0);
}

}  // namespace treesched
