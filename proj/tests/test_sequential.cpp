#include <doctest.h>

#include <random>

#include "support.hpp"
#include "treesched/generators.hpp"
#include "treesched/sequential.hpp"

using namespace treesched;
using test_support::oracle_min_peak;
using test_support::random_pebble_tree;
using test_support::random_tree;

TEST_CASE("optimal postorder peak on reference trees") {
    CHECK(optimal_postorder(gen_widefork(3)).peak == 6);   // 2m
    CHECK(optimal_postorder(gen_widefork(10)).peak == 20);
    CHECK(optimal_postorder(parse_tree("1 0 1 0 1\n")).peak == 1);
    CHECK(optimal_postorder(gen_inner_adversary(3, 5)).peak == 4);  // p+1
}

TEST_CASE("optimal postorder returns a postorder and agrees with sequential_peak") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
        const TaskTree tree = random_tree(rng, 1 + int(rng() % 50), 6, 3, 5);
        const PostorderResult po = optimal_postorder(tree);
        CHECK(is_postorder(tree, po.order));
        CHECK(sequential_peak(tree, po.order) == po.peak);
    }
}

TEST_CASE("sequential_peak on hand-checked orders") {
    // root with two unit leaves: 2 inputs + 1 output while the root runs
    const TaskTree pebble = parse_tree("1 0 1 0 1\n2 1 1 0 1\n3 1 1 0 1\n");
    const NodeOrder order =
        NodeOrder::from_sequence(NodeOrder::Kind::Custom, std::vector<NodeId>{2, 3, 1});
    CHECK(sequential_peak(pebble, order) == 3);

    // widefork(3), subtrees left to right: peak (m-1) leftovers + (m+1)
    const TaskTree wide = gen_widefork(3);
    std::vector<NodeId> seq;
    for (NodeId mid : wide.children(wide.root())) {
        for (NodeId leaf : wide.children(mid)) seq.push_back(leaf);
        seq.push_back(mid);
    }
    seq.push_back(wide.root());
    CHECK(sequential_peak(wide, NodeOrder::from_sequence(NodeOrder::Kind::Custom, seq)) == 6);
}

TEST_CASE("sequential_peak rejects non-topological orders") {
    const TaskTree pebble = parse_tree("1 0 1 0 1\n2 1 1 0 1\n3 1 1 0 1\n");
    const NodeOrder bad =
        NodeOrder::from_sequence(NodeOrder::Kind::Custom, std::vector<NodeId>{1, 2, 3});
    CHECK_THROWS_AS(sequential_peak(pebble, bad), std::invalid_argument);
}

TEST_CASE("brute force minimum peak on tiny trees") {
    // chain of 3 pebble nodes: one input + one output at every step
    const TaskTree chain = parse_tree("1 0 1 0 1\n2 1 1 0 1\n3 2 1 0 1\n");
    CHECK(brute_force_min_peak(chain) == 2);

    const TaskTree pebble = parse_tree("1 0 1 0 1\n2 1 1 0 1\n3 1 1 0 1\n");
    CHECK(brute_force_min_peak(pebble) == 3);

    std::mt19937_64 rng(5);
    const TaskTree big = random_tree(rng, 13, 3, 2, 3);
    CHECK_THROWS_AS(brute_force_min_peak(big), std::invalid_argument);
}

TEST_CASE("brute force never beats the test oracle and is at most the postorder peak") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 40; ++i) {
        const int n = 1 + int(rng() % 8);
        const TaskTree tree = i % 2 ? random_tree(rng, n, 4, 2, 4) : random_pebble_tree(rng, n);
        const MemUnits brute = brute_force_min_peak(tree);
        CHECK(brute == oracle_min_peak(tree));
        CHECK(brute <= optimal_postorder(tree).peak);
    }
}

TEST_CASE("postorder equals the optimum on small wideforks and chains") {
    for (int m = 1; m <= 2; ++m) {
        const TaskTree tree = gen_widefork(m);
        CHECK(optimal_postorder(tree).peak == brute_force_min_peak(tree));
    }
    std::mt19937_64 rng(23);
    for (int len = 1; len <= 8; ++len) {
        std::vector<NodeRecord> records(len);
        for (int i = 1; i <= len; ++i) {
            records[i - 1].id = i;
            records[i - 1].parent = i == 1 ? 0 : i - 1;
            records[i - 1].w = 1;
            records[i - 1].n = static_cast<MemUnits>(rng() % 3);
            records[i - 1].f = 1 + static_cast<MemUnits>(rng() % 3);
        }
        const TaskTree chain = TaskTree::build(std::move(records));
        CHECK(optimal_postorder(chain).peak == brute_force_min_peak(chain));
    }
}

TEST_CASE("postorder peak ignores the stored children order") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
        const TaskTree tree = random_tree(rng, 2 + int(rng() % 30), 5, 3, 6);
        const MemUnits reference = optimal_postorder(tree).peak;

        // rebuild with records in a shuffled order; children lists follow it
        std::vector<NodeRecord> records;
        for (NodeId id = 1; id <= tree.size(); ++id) records.push_back(tree.node(id));
        std::shuffle(records.begin(), records.end(), rng);
        const TaskTree shuffled = TaskTree::build(std::move(records));
        CHECK(optimal_postorder(shuffled).peak == reference);
    }
}

TEST_CASE("postorder peak dominates the largest node demand") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        const TaskTree tree = random_tree(rng, 1 + int(rng() % 40), 5, 4, 6);
        MemUnits max_node = 0;
        for (NodeId id = 1; id <= tree.size(); ++id)
            max_node = std::max(max_node, tree.node_memory(id));
        CHECK(optimal_postorder(tree).peak >= max_node);
    }
}
