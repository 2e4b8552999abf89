#include <doctest.h>

#include <random>

#include "support.hpp"
#include "treesched/bounds.hpp"
#include "treesched/generators.hpp"

using namespace treesched;

TEST_CASE("makespan lower bound is the larger of work/p and the critical path") {
    const TaskTree wide2 = gen_widefork(2);  // 7 pebble nodes, critical path 3
    CHECK(makespan_lower_bound(wide2, 2) == Rational{7, 2});

    const TaskTree fork = gen_fork(2, 3);  // 7 unit tasks, critical path 2
    CHECK(makespan_lower_bound(fork, 2) == Rational{7, 2});

    // p=1 degenerates to the total work
    CHECK(makespan_lower_bound(fork, 1) == Rational{7, 1});
    CHECK_THROWS_AS(makespan_lower_bound(fork, 0), std::invalid_argument);
}

TEST_CASE("memory-time product bound") {
    // pebble trees evaluate to 2n-1
    for (int m = 1; m <= 4; ++m) {
        const TaskTree tree = gen_widefork(m);
        CHECK(memory_makespan_product_bound(tree) == 2 * tree.size() - 1);
    }
    CHECK(memory_makespan_product_bound(parse_tree("1 0 1 0 1\n")) == 1);

    // (4+1+3)*2 + (0+4)*1
    const TaskTree two = parse_tree("1 0 2 1 3\n2 1 1 0 4\n");
    CHECK(memory_makespan_product_bound(two) == 20);
}

TEST_CASE("depths follow the weighted root path") {
    std::vector<NodeRecord> records(5);
    for (int i = 1; i <= 5; ++i) {
        records[i - 1].id = i;
        records[i - 1].parent = i - 1;
        records[i - 1].w = 1;
        records[i - 1].f = 1;
    }
    const TaskTree chain = TaskTree::build(std::move(records));
    const std::vector<TimeUnits> d = depths(chain);
    for (int i = 1; i <= 5; ++i) CHECK(d[i - 1] == i);

    const TaskTree wide = gen_widefork(3);
    const std::vector<TimeUnits> dw = depths(wide);
    CHECK(dw[wide.root() - 1] == 1);
    for (NodeId mid : wide.children(wide.root())) {
        CHECK(dw[mid - 1] == 2);
        for (NodeId leaf : wide.children(mid)) CHECK(dw[leaf - 1] == 3);
    }

    // a zero-weight child inherits the parent's path length
    const TaskTree zero = parse_tree("1 0 2 0 1\n2 1 0 0 1\n");
    CHECK(depths(zero)[1] == 2);
}

TEST_CASE("depths satisfy the recursion node by node") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
        const TaskTree tree = test_support::random_tree(rng, 1 + int(rng() % 50), 7, 2, 5);
        const std::vector<TimeUnits> d = depths(tree);
        CHECK(d[tree.root() - 1] == tree.node(tree.root()).w);
        for (NodeId id = 1; id <= tree.size(); ++id)
            for (NodeId c : tree.children(id)) CHECK(d[c - 1] == d[id - 1] + tree.node(c).w);
    }
}

TEST_CASE("bounds report is internally consistent") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 20; ++i) {
        const TaskTree tree = test_support::random_tree(rng, 1 + int(rng() % 50), 7, 2, 5);
        for (int p : {1, 2, 5}) {
            const BoundsReport report = compute_bounds(tree, p);
            CHECK(report.makespan_lb >= report.work_over_p);
            CHECK(report.makespan_lb >= Rational{report.critical_path, 1});
            CHECK(report.mem_time_product_lb >= 0);
        }
    }
}

TEST_CASE("rational rendering uses six digits") {
    CHECK(Rational{7, 2}.to_string() == "3.500000");
    CHECK(Rational{1, 3}.to_string() == "0.333333");
    CHECK(Rational{41, 4}.to_string() == "10.250000");
}
