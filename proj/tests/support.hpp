#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "treesched/schedule.hpp"
#include "treesched/tree.hpp"

namespace test_support {

using namespace treesched;

/// Small random tree: node 1 is the root, node i attaches to a uniform
/// earlier node. Weights drawn from the given inclusive ranges.
inline TaskTree random_tree(std::mt19937_64& rng, int n, std::int64_t w_max, std::int64_t n_max,
                            std::int64_t f_max, bool positive_w = false) {
    std::vector<NodeRecord> records(n);
    for (int i = 1; i <= n; ++i) {
        NodeRecord& r = records[i - 1];
        r.id = i;
        r.parent = i == 1 ? 0 : static_cast<NodeId>(1 + rng() % (i - 1));
        r.w = static_cast<TimeUnits>(rng() % (w_max + 1));
        if (positive_w && r.w == 0) r.w = 1;
        r.n = static_cast<MemUnits>(rng() % (n_max + 1));
        r.f = static_cast<MemUnits>(rng() % (f_max + 1));
    }
    return TaskTree::build(std::move(records));
}

/// Pebble-game weights (w=1, n=0, f=1) on a random shape.
inline TaskTree random_pebble_tree(std::mt19937_64& rng, int n) {
    std::vector<NodeRecord> records(n);
    for (int i = 1; i <= n; ++i) {
        NodeRecord& r = records[i - 1];
        r.id = i;
        r.parent = i == 1 ? 0 : static_cast<NodeId>(1 + rng() % (i - 1));
        r.w = 1;
        r.n = 0;
        r.f = 1;
    }
    return TaskTree::build(std::move(records));
}

/// Exhaustive minimum sequential peak over all topological orders, written
/// independently of the library (plain recursion over completion sets).
/// Usable up to ~18 nodes.
inline MemUnits oracle_min_peak(const TaskTree& tree) {
    const int n = tree.size();
    std::vector<MemUnits> memo(std::size_t(1) << n, -1);
    const std::uint32_t full = (1u << n) - 1;

    auto solve = [&](auto&& self, std::uint32_t done) -> MemUnits {
        if (done == full) return 0;
        if (memo[done] >= 0) return memo[done];
        MemUnits resident = 0;
        for (NodeId id = 1; id <= n; ++id) {
            if (!(done & (1u << (id - 1)))) continue;
            const NodeId p = tree.parent(id);
            if (p == 0 || !(done & (1u << (p - 1)))) resident += tree.node(id).f;
        }
        MemUnits best = -1;
        for (NodeId id = 1; id <= n; ++id) {
            if (done & (1u << (id - 1))) continue;
            bool ready = true;
            for (NodeId c : tree.children(id))
                if (!(done & (1u << (c - 1)))) ready = false;
            if (!ready) continue;
            const MemUnits during = resident + tree.node(id).n + tree.node(id).f;
            const MemUnits peak = std::max(during, self(self, done | (1u << (id - 1))));
            if (best < 0 || peak < best) best = peak;
        }
        memo[done] = best;
        return best;
    };
    return solve(solve, 0);
}

/// Total processing time of the subtree rooted at each node.
inline std::vector<TimeUnits> oracle_subtree_work(const TaskTree& tree) {
    std::vector<TimeUnits> w(tree.size() + 1, 0);
    std::vector<NodeId> stack{tree.root()};
    std::vector<NodeId> topo;
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        topo.push_back(id);
        for (NodeId c : tree.children(id)) stack.push_back(c);
    }
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        w[*it] = tree.node(*it).w;
        for (NodeId c : tree.children(*it)) w[*it] += w[c];
    }
    return w;
}

/// Minimum ParSubtrees makespan over every valid splitting, by enumerating
/// all ancestor-closed cut sets. A splitting runs the p heaviest remaining
/// subtrees in parallel and everything else sequentially.
inline TimeUnits oracle_best_splitting(const TaskTree& tree, int p) {
    const int n = tree.size();
    const std::vector<TimeUnits> W = oracle_subtree_work(tree);

    TimeUnits best = -1;
    for (std::uint32_t cut = 0; cut < (1u << n); ++cut) {
        // cut = sequential node set; must be closed under parents and
        // contain the root when nonempty.
        bool valid = true;
        for (NodeId id = 1; id <= n && valid; ++id) {
            if (!(cut & (1u << (id - 1)))) continue;
            const NodeId parent = tree.parent(id);
            if (parent != 0 && !(cut & (1u << (parent - 1)))) valid = false;
        }
        if (!valid) continue;

        std::vector<TimeUnits> roots;  // subtree weights of the cut's fringe
        TimeUnits seq = 0;
        for (NodeId id = 1; id <= n; ++id) {
            if (cut & (1u << (id - 1))) {
                seq += tree.node(id).w;
                continue;
            }
            const NodeId parent = tree.parent(id);
            const bool is_root_of_piece = parent == 0 || (cut & (1u << (parent - 1)));
            if (is_root_of_piece) roots.push_back(W[id]);
        }
        if (roots.empty()) {
            // whole tree sequential is never better than running it as one
            // parallel subtree; skip (not a splitting in the algorithm's sense)
            continue;
        }
        std::sort(roots.begin(), roots.end(), std::greater<>());
        TimeUnits makespan = roots[0] + seq;
        for (std::size_t i = p; i < roots.size(); ++i) makespan += roots[i];
        if (best < 0 || makespan < best) best = makespan;
    }
    return best;
}

inline Schedule one_proc_schedule(const TaskTree& tree, const std::vector<NodeId>& sequence) {
    Schedule sched(1, tree.size());
    TimeUnits t = 0;
    for (NodeId id : sequence) {
        sched.assign(id, t, 1);
        t += tree.node(id).w;
    }
    return sched;
}

}  // namespace test_support
