#include <doctest.h>

#include <random>

#include "support.hpp"
#include "treesched/generators.hpp"
#include "treesched/tree.hpp"

using namespace treesched;

TEST_CASE("parse_tree reads the line format") {
    const TaskTree tree = parse_tree("1 0 1 0 1\n2 1 1 0 1\n3 1 1 0 1");
    CHECK(tree.size() == 3);
    CHECK(tree.root() == 1);
    CHECK(tree.children(1) == std::vector<NodeId>{2, 3});
    CHECK(tree.is_leaf(2));
    CHECK(tree.is_leaf(3));
}

TEST_CASE("parse_tree skips comments and blank lines") {
    const TaskTree tree = parse_tree("# header\n\n1 0 2 1 3\n");
    CHECK(tree.size() == 1);
    CHECK(tree.node(1).w == 2);
    CHECK(tree.node(1).n == 1);
    CHECK(tree.node(1).f == 3);
}

TEST_CASE("parse_tree reports malformed input with line numbers") {
    CHECK_THROWS_WITH_AS(parse_tree("1 0 1 0\n"), doctest::Contains("line 1"), ParseError);
    CHECK_THROWS_WITH_AS(parse_tree("1 0 1 0 1\n1 1 1 0 1\n"), doctest::Contains("line 2"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_tree("1 0 1 0 1\n2 1 1 0 1\n2 1 1 0 1\n"),
                         doctest::Contains("duplicate"), ParseError);
    CHECK_THROWS_WITH_AS(parse_tree("1 2 1 0 1\n2 1 1 0 1\n"), doctest::Contains("missing root"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_tree("1 0 1 0 1\n2 0 1 0 1\n"), doctest::Contains("multiple roots"),
                         ParseError);
    CHECK_THROWS_AS(parse_tree("1 0 1 0 -1\n"), ParseError);
}

TEST_CASE("parse_tree rejects cycles with the offending line") {
    // node 2 lists parent 3 and node 3 lists parent 2
    const char* text = "1 0 1 0 1\n2 3 1 0 1\n3 2 1 0 1\n";
    CHECK_THROWS_WITH_AS(parse_tree(text), doctest::Contains("cycle"), ParseError);
}

TEST_CASE("serialize then parse is the identity") {
    const TaskTree fork = gen_fork(2, 3);
    CHECK(parse_tree(serialize_tree(fork)) == fork);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 25; ++i) {
        const TaskTree tree = test_support::random_tree(rng, 1 + int(rng() % 40), 9, 4, 7);
        CHECK(parse_tree(serialize_tree(tree)) == tree);
    }
}

TEST_CASE("inputs sums the children's output files") {
    const TaskTree tree = parse_tree("1 0 1 0 9\n2 1 1 0 3\n3 1 1 0 4\n");
    CHECK(tree.inputs(1) == 7);
    CHECK(tree.inputs(2) == 0);  // leaf
    CHECK(tree.inputs(3) == 0);

    const TaskTree wide = gen_widefork(3);
    CHECK(wide.inputs(wide.root()) == 3);
}

TEST_CASE("node_memory is inputs + n + f") {
    const TaskTree single = parse_tree("1 0 2 1 3\n");
    CHECK(single.node_memory(1) == 4);

    // pebble-game inner node with two children
    const TaskTree pebble = parse_tree("1 0 1 0 1\n2 1 1 0 1\n3 1 1 0 1\n");
    CHECK(pebble.node_memory(1) == 3);

    const TaskTree big = parse_tree("1 0 1 2 5\n2 1 1 0 3\n3 1 1 0 4\n");
    CHECK(big.node_memory(1) == 14);
}

TEST_CASE("unknown node ids are rejected") {
    const TaskTree tree = parse_tree("1 0 1 0 1\n");
    CHECK_THROWS_AS(tree.inputs(2), std::out_of_range);
    CHECK_THROWS_AS(tree.node_memory(0), std::out_of_range);
}

TEST_CASE("structural invariants over random trees") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
        const TaskTree tree = test_support::random_tree(rng, 1 + int(rng() % 60), 5, 3, 6);
        int child_links = 0;
        for (NodeId id = 1; id <= tree.size(); ++id) {
            child_links += static_cast<int>(tree.children(id).size());
            CHECK(tree.node_memory(id) >= tree.node(id).f);
            CHECK(tree.node_memory(id) >= tree.inputs(id));
            for (NodeId c : tree.children(id)) CHECK(tree.parent(c) == id);
        }
        CHECK(child_links == tree.size() - 1);
    }
}
