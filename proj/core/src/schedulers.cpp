#include "treesched/schedulers.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "treesched/bounds.hpp"

namespace treesched {

namespace {

std::vector<TimeUnits> subtree_weights(const TaskTree& tree) {
    std::vector<TimeUnits> weight(tree.size() + 1, 0);
    std::vector<NodeId> topo;
    topo.reserve(tree.size());
    std::vector<NodeId> stack{tree.root()};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        topo.push_back(id);
        for (NodeId c : tree.children(id)) stack.push_back(c);
    }
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        TimeUnits w = tree.node(*it).w;
        for (NodeId c : tree.children(*it)) w += weight[c];
        weight[*it] = w;
    }
    return weight;
}

// Queue order of SplitSubtrees: non-increasing subtree weight, ties by
// non-increasing own work, then smaller id.
struct HeavierSubtree {
    const std::vector<TimeUnits>* weight;
    const TaskTree* tree;
    bool operator()(NodeId a, NodeId b) const {
        if ((*weight)[a] != (*weight)[b]) return (*weight)[a] > (*weight)[b];
        if (tree->node(a).w != tree->node(b).w) return tree->node(a).w > tree->node(b).w;
        return a < b;
    }
};

void require_processors(int p) {
    if (p < 1) throw std::invalid_argument("processor count must be >= 1");
}

void require_order(const TaskTree& tree, const NodeOrder& order) {
    if (order.size() != tree.size())
        throw std::invalid_argument("node order does not cover the tree");
}

}  // namespace

Splitting split_subtrees(const TaskTree& tree, int p) {
    require_processors(p);
    const std::vector<TimeUnits> weight = subtree_weights(tree);

    using Queue = std::set<NodeId, HeavierSubtree>;
    const HeavierSubtree cmp{&weight, &tree};
    Queue pq(cmp);
    pq.insert(tree.root());
    TimeUnits in_queue = weight[tree.root()];

    Splitting split;
    split.step_makespans.push_back(weight[tree.root()]);  // rank 0: no cut

    std::vector<NodeId> pops;
    TimeUnits seq_work = 0;
    while (true) {
        const NodeId head = *pq.begin();
        if (weight[head] <= tree.node(head).w) break;  // heaviest subtree is a single task
        pq.erase(pq.begin());
        in_queue -= weight[head];
        seq_work += tree.node(head).w;
        pops.push_back(head);
        for (NodeId c : tree.children(head)) {
            pq.insert(c);
            in_queue += weight[c];
        }
        // Estimated makespan: heaviest subtree in parallel + all sequential
        // work + everything beyond the p heaviest subtrees.
        TimeUnits top = 0;
        int count = 0;
        for (auto it = pq.begin(); it != pq.end() && count < p; ++it, ++count) top += weight[*it];
        split.step_makespans.push_back(weight[*pq.begin()] + seq_work + (in_queue - top));
    }

    int best = 0;
    for (int s = 1; s < static_cast<int>(split.step_makespans.size()); ++s)
        if (split.step_makespans[s] < split.step_makespans[best]) best = s;
    split.chosen_rank = best;

    // Rebuild the queue state at the chosen rank; the pop sequence is a
    // prefix of `pops` by construction.
    Queue chosen(cmp);
    chosen.insert(tree.root());
    for (int s = 0; s < best; ++s) {
        chosen.erase(pops[s]);
        for (NodeId c : tree.children(pops[s])) chosen.insert(c);
        split.seq_set.push_back(pops[s]);
    }
    int count = 0;
    for (NodeId id : chosen) {
        if (count++ < p)
            split.parallel_roots.push_back(id);
        else
            split.surplus_roots.push_back(id);
    }
    return split;
}

namespace {

std::vector<NodeId> subtree_nodes(const TaskTree& tree, NodeId root) {
    std::vector<NodeId> out;
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        out.push_back(id);
        for (NodeId c : tree.children(id)) stack.push_back(c);
    }
    return out;
}

// Schedules the remaining nodes on one processor from time t0, following an
// optimal postorder of the quotient tree in which each already-processed
// subtree is replaced by a zero-work leaf carrying its output.
void schedule_remainder(const TaskTree& tree, const std::vector<NodeId>& replaced_roots,
                        Schedule& sched, TimeUnits t0, int proc) {
    std::vector<bool> keep(tree.size() + 1, true);
    std::vector<bool> replaced(tree.size() + 1, false);
    for (NodeId r : replaced_roots) {
        for (NodeId id : subtree_nodes(tree, r)) keep[id] = false;
        keep[r] = true;
        replaced[r] = true;
    }

    std::vector<NodeId> members;
    for (NodeId id = 1; id <= tree.size(); ++id)
        if (keep[id]) members.push_back(id);
    if (members.size() == replaced_roots.size()) return;  // nothing left to run

    std::vector<NodeId> to_quotient(tree.size() + 1, 0);
    for (std::size_t i = 0; i < members.size(); ++i)
        to_quotient[members[i]] = static_cast<NodeId>(i + 1);

    std::vector<NodeRecord> records;
    records.reserve(members.size());
    for (NodeId id : members) {
        const NodeRecord& src = tree.node(id);
        NodeRecord r;
        r.id = to_quotient[id];
        r.parent = src.parent == 0 ? 0 : to_quotient[src.parent];
        if (replaced[id]) {
            r.w = 0;
            r.n = 0;
            r.f = src.f;
        } else {
            r.w = src.w;
            r.n = src.n;
            r.f = src.f;
        }
        records.push_back(std::move(r));
    }
    const TaskTree quotient = TaskTree::build(std::move(records));
    const PostorderResult po = optimal_postorder(quotient);

    TimeUnits t = t0;
    for (NodeId qid : po.order.sequence) {
        const NodeId orig = members[qid - 1];
        if (replaced[orig]) continue;  // ran in the parallel phase
        sched.assign(orig, t, proc);
        t += tree.node(orig).w;
    }
}

}  // namespace

Schedule par_subtrees(const TaskTree& tree, int p, bool optim) {
    require_processors(p);
    const Splitting split = split_subtrees(tree, p);
    const std::vector<TimeUnits> weight = subtree_weights(tree);

    Schedule sched(p, tree.size());
    TimeUnits parallel_end = 0;
    std::vector<NodeId> replaced;

    auto run_subtree = [&](NodeId root, int proc, TimeUnits t0) {
        const SubtreePostorder po = optimal_postorder_subtree(tree, root);
        TimeUnits t = t0;
        for (NodeId id : po.sequence) {
            sched.assign(id, t, proc);
            t += tree.node(id).w;
        }
        return t;
    };

    if (!optim) {
        // The p heaviest subtrees run concurrently, everything else follows
        // sequentially.
        for (std::size_t i = 0; i < split.parallel_roots.size(); ++i) {
            const NodeId r = split.parallel_roots[i];
            parallel_end = std::max(parallel_end, run_subtree(r, static_cast<int>(i) + 1, 0));
        }
        replaced = split.parallel_roots;
    } else {
        // LPT packing of every subtree of the splitting.
        std::vector<NodeId> roots = split.parallel_roots;
        roots.insert(roots.end(), split.surplus_roots.begin(), split.surplus_roots.end());
        std::vector<TimeUnits> load(p, 0);
        for (NodeId r : roots) {
            int proc = 0;
            for (int q = 1; q < p; ++q)
                if (load[q] < load[proc]) proc = q;
            load[proc] = run_subtree(r, proc + 1, load[proc]);
        }
        parallel_end = *std::max_element(load.begin(), load.end());
        replaced = roots;
    }

    schedule_remainder(tree, replaced, sched, parallel_end, 1);
    return sched;
}

NodeOrder order_inner_first(const TaskTree& tree) {
    const PostorderResult po = optimal_postorder(tree);
    std::vector<NodeId> seq(po.order.sequence);
    std::stable_sort(seq.begin(), seq.end(), [&](NodeId a, NodeId b) {
        const bool leaf_a = tree.is_leaf(a);
        const bool leaf_b = tree.is_leaf(b);
        if (leaf_a != leaf_b) return !leaf_a;
        return po.order.rank_of(a) < po.order.rank_of(b);
    });
    return NodeOrder::from_sequence(NodeOrder::Kind::Custom, std::move(seq));
}

NodeOrder order_deepest_first(const TaskTree& tree) {
    const PostorderResult po = optimal_postorder(tree);
    const std::vector<TimeUnits> depth = depths(tree);
    std::vector<NodeId> seq(po.order.sequence);
    std::sort(seq.begin(), seq.end(), [&](NodeId a, NodeId b) {
        if (depth[a - 1] != depth[b - 1]) return depth[a - 1] > depth[b - 1];
        const bool leaf_a = tree.is_leaf(a);
        const bool leaf_b = tree.is_leaf(b);
        if (leaf_a != leaf_b) return !leaf_a;
        return po.order.rank_of(a) < po.order.rank_of(b);
    });
    return NodeOrder::from_sequence(NodeOrder::Kind::DeepestFirst, std::move(seq));
}

namespace {

// Shared event-driven core of the three list schedulers. The admission
// callback may refuse the queue head, which stops assignment until the next
// event; started/finished callbacks keep the engines' memory accounting.
// Nodes of zero duration finish within the same instant: each wave of such
// finishes is retired before assignment resumes at that timestamp.
struct ListEngine {
    const TaskTree& tree;
    int processors;
    Schedule sched;
    std::priority_queue<std::pair<int, NodeId>, std::vector<std::pair<int, NodeId>>,
                        std::greater<>>
        ready;                       // keyed by order rank
    std::set<int> free_procs;
    std::priority_queue<std::pair<TimeUnits, NodeId>, std::vector<std::pair<TimeUnits, NodeId>>,
                        std::greater<>>
        events;
    std::vector<int> pending;        // unfinished children per node
    const NodeOrder& order;
    int scheduled = 0;

    ListEngine(const TaskTree& t, int p, const NodeOrder& o)
        : tree(t), processors(p), sched(p, t.size()), pending(t.size() + 1, 0), order(o) {
        for (int q = 1; q <= p; ++q) free_procs.insert(q);
        for (NodeId id = 1; id <= t.size(); ++id) {
            pending[id] = static_cast<int>(t.children(id).size());
            if (pending[id] == 0) ready.emplace(o.rank_of(id), id);
        }
    }

    template <typename Admit, typename Started, typename Finished, typename Ready>
    void run(Admit admit, Started started, Finished finished, Ready became_ready) {
        process_time(0, admit, started, finished, became_ready);
        while (!events.empty()) {
            const TimeUnits t = events.top().first;
            process_time(t, admit, started, finished, became_ready);
        }
        if (!ready.empty()) {
            const NodeId head = ready.top().second;
            throw MemoryLimitError("deadlock: no node is running and node " +
                                   std::to_string(head) +
                                   " cannot be admitted under the memory limit");
        }
        if (scheduled != tree.size())
            throw std::logic_error("scheduler failed to place every node");
    }

    template <typename Admit, typename Started, typename Finished, typename Ready>
    void process_time(TimeUnits t, Admit admit, Started started, Finished finished,
                      Ready became_ready) {
        std::vector<NodeId> finishing;
        while (!events.empty() && events.top().first == t) {
            finishing.push_back(events.top().second);
            events.pop();
        }
        for (;;) {
            for (NodeId id : finishing) retire(id, finished, became_ready);
            finishing.clear();
            while (!free_procs.empty() && !ready.empty()) {
                const NodeId head = ready.top().second;
                if (!admit(head)) break;  // assignment stops until the next event
                ready.pop();
                const int proc = *free_procs.begin();
                free_procs.erase(free_procs.begin());
                sched.assign(head, t, proc);
                ++scheduled;
                started(head);
                if (tree.node(head).w == 0)
                    finishing.push_back(head);
                else
                    events.emplace(t + tree.node(head).w, head);
            }
            if (finishing.empty()) break;
        }
    }

    template <typename Finished, typename Ready>
    void retire(NodeId id, Finished finished, Ready became_ready) {
        free_procs.insert(sched.proc_of(id));
        finished(id);
        const NodeId parent = tree.parent(id);
        if (parent != 0 && --pending[parent] == 0) {
            became_ready(parent);
            ready.emplace(order.rank_of(parent), parent);
        }
    }
};

void require_reduction(const TaskTree& tree, const char* who) {
    for (NodeId id = 1; id <= tree.size(); ++id)
        if (tree.node(id).n != 0)
            throw std::invalid_argument(std::string(who) + " requires n = 0 everywhere");
    for (NodeId id = 1; id <= tree.size(); ++id)
        if (tree.is_inner(id) && tree.node(id).f > tree.inputs(id))
            throw std::invalid_argument(std::string(who) + " requires a reduction tree");
}

}  // namespace

Schedule list_schedule(const TaskTree& tree, int p, const NodeOrder& order) {
    require_processors(p);
    require_order(tree, order);
    ListEngine engine(tree, p, order);
    auto nothing = [](NodeId) {};
    engine.run([](NodeId) { return true; }, nothing, nothing, nothing);
    return engine.sched;
}

Schedule list_schedule_mem_limit(const TaskTree& tree, int p, const NodeOrder& order, MemUnits M,
                                 bool optim) {
    require_processors(p);
    require_order(tree, order);
    require_reduction(tree, "list_schedule_mem_limit");

    // M_used charges a node's output at its start and releases its inputs at
    // its completion, so on a reduction tree it equals the resident memory
    // exactly. The three component counters split the same total for the
    // optimistic leaf test: inputs of running inner nodes, outputs of
    // running leaves, and stored outputs whose consumer has not started.
    MemUnits m_used = 0;
    MemUnits in_inner = 0;
    MemUnits out_leaf = 0;
    MemUnits in_idle = 0;

    ListEngine engine(tree, p, order);
    auto admit = [&](NodeId c) {
        if (tree.is_inner(c)) return true;
        if (!optim) return m_used + tree.node(c).f <= M;
        // Aggressive variant: running inner nodes' outputs are not charged.
        // Running leaf outputs must count at full weight: a half-weight
        // charge leaks when those leaves finish (their files turn into
        // stored inputs) and the doubled-limit guarantee breaks.
        return in_inner + out_leaf + in_idle + tree.node(c).f <= M;
    };
    auto started = [&](NodeId c) {
        m_used += tree.node(c).f;
        if (tree.is_inner(c)) {
            in_idle -= tree.inputs(c);
            in_inner += tree.inputs(c);
        } else {
            out_leaf += tree.node(c).f;
        }
    };
    auto finished = [&](NodeId c) {
        m_used -= tree.inputs(c);
        if (tree.is_inner(c)) {
            in_inner -= tree.inputs(c);
            in_idle += tree.node(c).f;
        } else {
            out_leaf -= tree.node(c).f;
            in_idle += tree.node(c).f;
        }
    };
    auto became_ready = [](NodeId) {};

    engine.run(admit, started, finished, became_ready);
    return engine.sched;
}

std::vector<MemUnits> compute_contribs(const TaskTree& tree, const NodeOrder& postorder) {
    require_order(tree, postorder);
    require_reduction(tree, "compute_contribs");
    if (!is_postorder(tree, postorder))
        throw std::invalid_argument("compute_contribs requires a postorder");

    std::vector<MemUnits> contrib(tree.size() + 1, 0);
    for (NodeId id = 1; id <= tree.size(); ++id) {
        if (tree.is_leaf(id)) continue;
        std::vector<NodeId> kids = tree.children(id);
        std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
            return postorder.rank_of(a) > postorder.rank_of(b);
        });
        // Settled from the last-executed child down: an inner child books at
        // most what its completion frees, a leaf child books the rest.
        MemUnits remaining = tree.node(id).f;
        for (NodeId j : kids) {
            const MemUnits c =
                tree.is_inner(j) ? std::min(tree.inputs(j), remaining) : std::max<MemUnits>(0, remaining);
            contrib[j] = c;
            remaining -= c;
        }
    }
    return contrib;
}

Schedule mem_booking_inner_first(const TaskTree& tree, int p, const NodeOrder& postorder,
                                 MemUnits M) {
    require_processors(p);
    require_order(tree, postorder);
    require_reduction(tree, "mem_booking_inner_first");
    if (!is_postorder(tree, postorder))
        throw std::invalid_argument("mem_booking_inner_first requires a postorder");
    const MemUnits seq_peak = sequential_peak(tree, postorder);
    if (M < seq_peak)
        throw MemoryLimitError("memory limit " + std::to_string(M) +
                               " below the sequential postorder peak " + std::to_string(seq_peak));

    const std::vector<MemUnits> contrib = compute_contribs(tree, postorder);
    std::vector<MemUnits> booked(tree.size() + 1, 0);
    MemUnits m_used = 0;

    // R = sum of Booked over nodes of rank < ref_rank. For an unstarted leaf
    // at ref_rank this equals the booked total outside its ancestors, since
    // leaves start in postorder rank order and anything later has booked 0.
    MemUnits record = 0;
    int ref_rank = 1;
    auto advance_record = [&](int to_rank) {
        for (; ref_rank < to_rank; ++ref_rank) record += booked[postorder.sequence[ref_rank - 1]];
    };

    ListEngine engine(tree, p, postorder);
    auto admit = [&](NodeId j) {
        if (tree.is_inner(j)) return m_used + tree.node(j).f <= M;
        advance_record(postorder.rank_of(j));
        return m_used + tree.node(j).f + record <= M;
    };
    auto started = [&](NodeId j) {
        m_used += tree.node(j).f;
        if (tree.is_inner(j)) {
            if (postorder.rank_of(j) < ref_rank) record -= booked[j];
            booked[j] = 0;
        } else if (tree.parent(j) != 0) {
            const NodeId parent = tree.parent(j);
            booked[parent] += contrib[j];
            if (postorder.rank_of(parent) < ref_rank) record += contrib[j];
        }
    };
    auto finished = [&](NodeId j) {
        if (!tree.is_inner(j)) return;
        m_used -= tree.inputs(j);
        const NodeId parent = tree.parent(j);
        if (parent != 0) {
            booked[parent] += contrib[j];
            if (postorder.rank_of(parent) < ref_rank) record += contrib[j];
        }
    };
    auto became_ready = [](NodeId) {};

    engine.run(admit, started, finished, became_ready);
    return engine.sched;
}

}  // namespace treesched
