#include "treesched/generators.hpp"

#include <algorithm>
#include <random>

namespace treesched {

namespace {

struct TreeBuilder {
    std::vector<NodeRecord> records;

    NodeId add(NodeId parent, TimeUnits w, MemUnits n, MemUnits f) {
        NodeRecord r;
        r.id = static_cast<NodeId>(records.size() + 1);
        r.parent = parent;
        r.w = w;
        r.n = n;
        r.f = f;
        records.push_back(std::move(r));
        return records.back().id;
    }

    NodeId add_pebble(NodeId parent) { return add(parent, 1, 0, 1); }

    /// Chain of `len` pebble nodes below `parent`; returns the bottom node.
    NodeId add_pebble_chain(NodeId parent, int len) {
        NodeId cur = parent;
        for (int i = 0; i < len; ++i) cur = add_pebble(cur);
        return cur;
    }

    TaskTree build() { return TaskTree::build(std::move(records)); }
};

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

TaskTree gen_fork(int p, int k) {
    require(p >= 1 && k >= 1, "gen_fork requires p >= 1 and k >= 1");
    TreeBuilder b;
    const NodeId root = b.add_pebble(0);
    for (int i = 0; i < p * k; ++i) b.add_pebble(root);
    return b.build();
}

TaskTree gen_widefork(int m) {
    require(m >= 1, "gen_widefork requires m >= 1");
    TreeBuilder b;
    const NodeId root = b.add_pebble(0);
    for (int i = 0; i < m; ++i) {
        const NodeId mid = b.add_pebble(root);
        for (int j = 0; j < m; ++j) b.add_pebble(mid);
    }
    return b.build();
}

TaskTree gen_np3p(const std::vector<std::int64_t>& a) {
    require(!a.empty(), "gen_np3p requires a nonempty list");
    require(a.size() % 3 == 0, "gen_np3p requires |a| divisible by 3");
    const std::int64_t three_m = static_cast<std::int64_t>(a.size());
    TreeBuilder b;
    const NodeId root = b.add_pebble(0);
    for (std::int64_t ai : a) {
        require(ai >= 1, "gen_np3p requires positive a_i");
        const NodeId inner = b.add_pebble(root);
        for (std::int64_t j = 0; j < three_m * ai; ++j) b.add_pebble(inner);
    }
    return b.build();
}

TaskTree gen_comb_binary(int p, int k) {
    require(p >= 2 && k >= 2, "gen_comb_binary requires p >= 2 and k >= 2");
    const int top_leaves = (p + 1) / 2;
    TreeBuilder b;
    // Complete binary top subtree in heap order: node h has children 2h and
    // 2h+1 when they exist; leaves are h in [top_leaves, 2*top_leaves - 1].
    const int top_size = 2 * top_leaves - 1;
    std::vector<NodeId> heap(top_size + 1, 0);
    heap[1] = b.add_pebble(0);
    for (int h = 2; h <= top_size; ++h) heap[h] = b.add_pebble(heap[h / 2]);

    // Each top leaf roots a comb of height k (spine of k nodes counting the
    // top leaf, one extra leaf per spine node above the bottom). When p is
    // odd the shallowest top leaf roots a plain chain of k-1 nodes instead.
    for (int h = top_leaves; h <= top_size; ++h) {
        if (p % 2 == 1 && h == top_leaves) {
            b.add_pebble_chain(heap[h], k - 2);
            continue;
        }
        NodeId spine = heap[h];
        for (int j = 0; j < k - 1; ++j) {
            b.add_pebble(spine);  // tooth
            spine = b.add_pebble(spine);
        }
    }
    return b.build();
}

TaskTree gen_chains_cp(int p, int delta, int k) {
    require(p >= 2 && delta >= 2 && k >= 1,
            "gen_chains_cp requires p >= 2, delta >= 2, k >= 1");
    TreeBuilder b;
    const NodeId root = b.add_pebble(0);
    for (int s = 0; s < p - 1; ++s) {
        NodeId cp = b.add_pebble(root);
        for (int j = 1; j <= delta - 1; ++j) {
            const NodeId d = b.add_pebble(cp);
            for (int l = 0; l < delta - j + 1; ++l) b.add_pebble(d);
            if (j < delta - 1)
                cp = b.add_pebble(cp);
            else
                b.add_pebble_chain(cp, k);
        }
    }
    return b.build();
}

TaskTree gen_inner_adversary(int p, int k) {
    require(p >= 2 && k >= 2, "gen_inner_adversary requires p >= 2 and k >= 2");
    TreeBuilder b;
    // Join backbone J_1..J_{k-1}; the joins above the deepest carry p-1
    // leaves each, the deepest carries p-2 plus a chain of k-1 nodes. Sized
    // so that on p processors the leaf packs and the chain drain together:
    // the inner-first scheduler then faces (k-1)(p-1)+1 resident files while
    // an optimal postorder stays at p+1.
    NodeId join = b.add_pebble(0);
    for (int i = 1; i <= k - 2; ++i) {
        for (int l = 0; l < p - 1; ++l) b.add_pebble(join);
        join = b.add_pebble(join);
    }
    for (int l = 0; l < p - 2; ++l) b.add_pebble(join);
    b.add_pebble_chain(join, k - 1);
    return b.build();
}

TaskTree gen_deepest_adversary(int c, int L) {
    require(c >= 2, "gen_deepest_adversary requires c >= 2");
    require(L >= c + 2, "gen_deepest_adversary: L too small to equalize depths");
    TreeBuilder b;
    // Binary spine v_1..v_{c-1}; chain i hangs at spine depth i and reaches
    // depth L, so all chain bottoms tie for deepest.
    NodeId spine = b.add_pebble(0);
    for (int i = 1; i <= c - 1; ++i) {
        b.add_pebble_chain(spine, L - i);
        if (i < c - 1)
            spine = b.add_pebble(spine);
        else
            b.add_pebble_chain(spine, L - c + 1);
    }
    return b.build();
}

TaskTree gen_membound_adversary(int p, int k, MemUnits M) {
    require(p >= 2 && k >= 1, "gen_membound_adversary requires p >= 2 and k >= 1");
    require(M % p == 0, "gen_membound_adversary requires p to divide M");
    TreeBuilder b;
    const NodeId root = b.add(0, 0, 0, 0);
    for (int i = 0; i < p; ++i) {
        const NodeId a = b.add(root, 0, 0, 0);
        const NodeId bb = b.add(a, 1, 0, 0);
        b.add(bb, 1, 0, M);      // c_i
        b.add(a, k, 0, M / p);   // d_i
    }
    return b.build();
}

TaskTree gen_flat(int p) {
    require(p >= 1, "gen_flat requires p >= 1");
    TreeBuilder b;
    const NodeId root = b.add(0, 0, 0, 0);
    for (int i = 0; i < p; ++i) b.add(root, 1, 1, 0);
    return b.build();
}

NodeWeights assembly_weights(std::int64_t eta, std::int64_t mu) {
    require(eta >= 1 && mu >= 1, "assembly weights require eta >= 1 and mu >= 1");
    NodeWeights weights;
    const std::int64_t m1 = mu - 1;
    weights.n = eta * eta + 2 * eta * m1;
    weights.w = (2 * eta * eta * eta) / 3 + eta * eta * m1 + eta * m1 * m1;
    weights.f = m1 * m1;
    return weights;
}

namespace {

// Bounded draw with explicit arithmetic so that results do not depend on the
// standard library's distribution implementation.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
    return bound == 0 ? 0 : rng() % bound;
}

}  // namespace

TaskTree gen_random_assembly(const AssemblyParams& params, std::uint64_t seed) {
    require(params.n_target >= 1, "gen_random_assembly requires n_target >= 1");
    require(params.eta_min >= 1 && params.eta_min <= params.eta_max,
            "gen_random_assembly: empty eta range");
    require(params.mu_min >= 1 && params.mu_min <= params.mu_max,
            "gen_random_assembly: empty mu range");
    require(params.max_degree >= 1, "gen_random_assembly requires max_degree >= 1");

    std::mt19937_64 rng(seed);
    TreeBuilder b;
    std::vector<int> degree(params.n_target + 1, 0);
    std::vector<int> depth(params.n_target + 1, 0);
    std::vector<NodeId> open;  // nodes still below the degree cap

    auto weights_of = [&]() {
        const std::int64_t eta =
            params.eta_min + static_cast<std::int64_t>(
                                 draw(rng, static_cast<std::uint64_t>(params.eta_max - params.eta_min + 1)));
        const std::int64_t mu =
            params.mu_min + static_cast<std::int64_t>(
                                draw(rng, static_cast<std::uint64_t>(params.mu_max - params.mu_min + 1)));
        return assembly_weights(eta, mu);
    };

    const NodeWeights rw = weights_of();
    const NodeId root = b.add(0, rw.w, rw.n, rw.f);
    depth[root] = 0;
    open.push_back(root);

    for (int i = 1; i < params.n_target; ++i) {
        // Pick 1 + |depth_bias| candidates and keep the deepest (bias > 0)
        // or shallowest (bias < 0); spans chain-like to fork-like shapes.
        const int tries = 1 + std::abs(params.depth_bias);
        NodeId parent = open[draw(rng, open.size())];
        for (int tr = 1; tr < tries; ++tr) {
            const NodeId other = open[draw(rng, open.size())];
            const bool deeper = depth[other] > depth[parent];
            if ((params.depth_bias > 0) == deeper && depth[other] != depth[parent]) parent = other;
        }
        const NodeWeights w = weights_of();
        const NodeId child = b.add(parent, w.w, w.n, w.f);
        depth[child] = depth[parent] + 1;
        open.push_back(child);
        if (++degree[parent] >= params.max_degree)
            open.erase(std::find(open.begin(), open.end(), parent));
    }
    return b.build();
}

std::string GenSpec::to_comment() const {
    std::string out = "# generated family=" + family + " params=";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(params[i]);
    }
    if (family == "random-assembly") out += " seed=" + std::to_string(seed);
    if (family == "inner-adversary" || family == "deepest-adversary")
        out += " (reconstructed shape, tuned to the documented memory behavior)";
    return out;
}

std::vector<std::string> GenSpec::known_families() {
    return {"fork",        "widefork",          "np3p",          "comb-binary",
            "chains-cp",   "inner-adversary",   "deepest-adversary",
            "membound-adversary", "flat",       "random-assembly"};
}

TaskTree generate(const GenSpec& spec) {
    const std::vector<std::int64_t>& a = spec.params;
    auto want = [&](std::size_t count, const char* usage) {
        if (a.size() != count)
            throw std::invalid_argument("family " + spec.family + " expects params " + usage);
    };
    if (spec.family == "fork") {
        want(2, "p,k");
        return gen_fork(static_cast<int>(a[0]), static_cast<int>(a[1]));
    }
    if (spec.family == "widefork") {
        want(1, "m");
        return gen_widefork(static_cast<int>(a[0]));
    }
    if (spec.family == "np3p") {
        if (a.empty()) throw std::invalid_argument("family np3p expects params a_1,...,a_3m");
        return gen_np3p(a);
    }
    if (spec.family == "comb-binary") {
        want(2, "p,k");
        return gen_comb_binary(static_cast<int>(a[0]), static_cast<int>(a[1]));
    }
    if (spec.family == "chains-cp") {
        want(3, "p,delta,k");
        return gen_chains_cp(static_cast<int>(a[0]), static_cast<int>(a[1]),
                             static_cast<int>(a[2]));
    }
    if (spec.family == "inner-adversary") {
        want(2, "p,k");
        return gen_inner_adversary(static_cast<int>(a[0]), static_cast<int>(a[1]));
    }
    if (spec.family == "deepest-adversary") {
        want(2, "c,L");
        return gen_deepest_adversary(static_cast<int>(a[0]), static_cast<int>(a[1]));
    }
    if (spec.family == "membound-adversary") {
        want(3, "p,k,M");
        return gen_membound_adversary(static_cast<int>(a[0]), static_cast<int>(a[1]), a[2]);
    }
    if (spec.family == "flat") {
        want(1, "p");
        return gen_flat(static_cast<int>(a[0]));
    }
    if (spec.family == "random-assembly") {
        want(7, "n,eta_min,eta_max,mu_min,mu_max,max_degree,depth_bias");
        AssemblyParams params;
        params.n_target = static_cast<int>(a[0]);
        params.eta_min = a[1];
        params.eta_max = a[2];
        params.mu_min = a[3];
        params.mu_max = a[4];
        params.max_degree = static_cast<int>(a[5]);
        params.depth_bias = static_cast<int>(a[6]);
        return gen_random_assembly(params, spec.seed);
    }
    throw std::invalid_argument("unknown generator family: " + spec.family);
}

}  // namespace treesched
