#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treesched/tree.hpp"

namespace treesched {

/// Description of a generated tree; identical specs produce structurally
/// identical trees. `params` is family-specific (see family docs below).
struct GenSpec {
    std::string family;
    std::vector<std::int64_t> params;
    std::uint64_t seed = 0;

    std::string to_comment() const;  // '# generated ...' header line
    static std::vector<std::string> known_families();
};

/// Height-1 tree: a root over p*k unit leaves (pebble weights).
TaskTree gen_fork(int p, int k);

/// Root with m children, each over m leaves; 1 + m + m^2 pebble nodes.
TaskTree gen_widefork(int m);

/// Root with 3m children N_i, N_i over 3m*a_i leaves; pebble weights.
/// |a| must be a nonzero multiple of 3.
TaskTree gen_np3p(const std::vector<std::int64_t>& a);

/// Complete binary top over ceil(p/2) comb subtrees of height k (the last
/// one a chain when p is odd); pk - 1 pebble nodes in total.
TaskTree gen_comb_binary(int p, int k);

/// p-1 identical subtrees: a spine cp_1..cp_{delta-1} with d_j nodes
/// carrying delta-j+1 leaves each, ending in a chain of k nodes.
TaskTree gen_chains_cp(int p, int delta, int k);

/// Backbone of join nodes over leaf packs with a chain below the deepest
/// join, sized so that the inner-first list scheduler on p processors hoards
/// (k-1)(p-1)+1 files while the best postorder needs only p+1.
TaskTree gen_inner_adversary(int p, int k);

/// c chains hanging off a binary spine with every chain bottom at depth L:
/// best postorder peak 3, while deepest-first runs all chains at once.
TaskTree gen_deepest_adversary(int c, int L);

/// Weighted gadget: root over p arms a_i with b_i -> c_i (output M) and
/// d_i (work k, output M/p); worst case for memory-bounded heuristics.
/// Requires p to divide M.
TaskTree gen_membound_adversary(int p, int k, MemUnits M);

/// Zero-size root over p leaves with w = n = 1, f = 0.
TaskTree gen_flat(int p);

/// Shape and weight parameters of the synthetic assembly-tree generator.
struct AssemblyParams {
    int n_target = 1;
    std::int64_t eta_min = 1, eta_max = 1;  // nodes amalgamated per supernode
    std::int64_t mu_min = 2, mu_max = 2;    // column fill of the highest node
    int max_degree = 8;                     // out-degree cap of the random shape
    int depth_bias = 0;                     // >0 favors deep shapes, <0 flat ones
};

struct NodeWeights {
    TimeUnits w = 0;
    MemUnits n = 0;
    MemUnits f = 0;
};

/// Dense-factorization cost model: n = eta^2 + 2*eta*(mu-1),
/// w = floor(2*eta^3/3) + eta^2*(mu-1) + eta*(mu-1)^2, f = (mu-1)^2.
NodeWeights assembly_weights(std::int64_t eta, std::int64_t mu);

/// Random attachment tree with the assembly weight model; deterministic in
/// the seed.
TaskTree gen_random_assembly(const AssemblyParams& params, std::uint64_t seed);

/// Dispatch on spec.family; throws std::invalid_argument for unknown
/// families or bad parameter counts.
TaskTree generate(const GenSpec& spec);

}  // namespace treesched
