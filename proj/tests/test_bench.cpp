#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "treesched/bench.hpp"
#include "treesched/generators.hpp"
#include "treesched/sequential.hpp"

using namespace treesched;

TEST_CASE("heuristic names resolve both ways") {
    CHECK(heuristic_names().size() == 9);
    for (const std::string& name : heuristic_names()) {
        auto h = parse_heuristic(name);
        REQUIRE(h.has_value());
        CHECK(heuristic_name(*h) == name);
    }
    CHECK(!parse_heuristic("par-magic").has_value());
    CHECK(is_memory_limited(Heuristic::MemBookingInnerFirst));
    CHECK_FALSE(is_memory_limited(Heuristic::ParSubtrees));
}

TEST_CASE("run_one composes scheduling, bounds and normalization") {
    const TaskTree fork = gen_fork(2, 3);
    const RunResult r = run_one(fork, Heuristic::ParSubtrees, 2, std::nullopt);
    CHECK(r.ok());
    CHECK(r.report.makespan == 6);
    CHECK(r.report.normalized_makespan == doctest::Approx(6.0 / 3.5));
    CHECK(r.report.normalized_memory == doctest::Approx(1.0));

    const TaskTree wide = gen_widefork(3);
    const RunResult rd = run_one(wide, Heuristic::ParDeepestFirst, 9, std::nullopt);
    CHECK(rd.report.makespan == 3);
}

TEST_CASE("run_one drives the memory-limited pipeline end to end") {
    // a tree with execution files and an expanding inner node
    const TaskTree tree = parse_tree("1 0 3 2 9\n2 1 2 1 3\n3 1 2 0 4\n4 2 1 1 2\n");
    const MemUnits reference = optimal_postorder(tree).peak;
    const RunResult r =
        run_one(tree, Heuristic::MemBookingInnerFirst, 2, std::optional<MemUnits>(3 * reference));
    CHECK(r.ok());
    CHECK(static_cast<int>(r.schedule.start.size()) == tree.size());
    CHECK(r.report.normalized_memory <= 3.0 + 1e-9);

    // a limit that cannot even hold the sequential postorder
    const RunResult refused =
        run_one(tree, Heuristic::MemBookingInnerFirst, 2, std::optional<MemUnits>(1));
    CHECK(refused.status == "did-not-run");
}

TEST_CASE("run_one rejects mismatched memory arguments") {
    const TaskTree fork = gen_fork(2, 2);
    CHECK_THROWS_AS(run_one(fork, Heuristic::ParSubtrees, 2, std::optional<MemUnits>(5)),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_one(fork, Heuristic::ParInnerFirstMemLimit, 2, std::nullopt),
                    std::invalid_argument);
}

namespace {

BenchConfig tiny_config(const std::string& output) {
    BenchConfig config;
    CorpusEntry entry;
    GenSpec spec;
    spec.family = "random-assembly";
    spec.params = {60, 1, 4, 2, 6, 5, 1};
    spec.seed = 99;
    entry.spec = spec;
    entry.name = "ra-99";
    config.corpus.push_back(entry);
    config.processors = {2, 4};
    config.memory_ratios = {1.0, 2.0};
    config.heuristics = {Heuristic::ParSubtrees, Heuristic::ParInnerFirst,
                         Heuristic::MemBookingInnerFirst};
    config.output = output;
    return config;
}

}  // namespace

TEST_CASE("run_bench emits one row per cell and is reproducible") {
    const BenchConfig config = tiny_config("");
    const BenchReport a = run_bench(config);
    // 2 unlimited heuristics * 2 p + 1 limited * 2 p * 2 ratios
    CHECK(a.rows.size() == 8);
    const BenchReport b = run_bench(config);
    CHECK(a.csv == b.csv);
    CHECK(a.json == b.json);

    int ok = 0;
    for (const RunResult& r : a.rows) {
        if (r.ok()) ++ok;
        if (r.ok()) {
            CHECK(r.report.normalized_makespan >= 1.0 - 1e-9);
            CHECK(static_cast<__int128>(r.report.peak_memory) * r.report.makespan >=
                  r.bounds.mem_time_product_lb);
        }
    }
    CHECK(ok == a.rows.size());  // booking at ratio >= 1 always runs
}

TEST_CASE("run_bench with a single cell writes the report files") {
    BenchConfig config;
    CorpusEntry entry;
    GenSpec spec;
    spec.family = "fork";
    spec.params = {2, 3};
    entry.spec = spec;
    entry.name = "fork-2-3";
    config.corpus.push_back(entry);
    config.processors = {2};
    config.heuristics = {Heuristic::ParSubtrees};
    config.output = "bench_test_report";

    const BenchReport report = run_bench(config);
    CHECK(report.rows.size() == 1);
    CHECK(report.rows.front().report.makespan == 6);

    std::ifstream json("bench_test_report.json");
    CHECK(json.good());
    std::ifstream csv("bench_test_report.csv");
    CHECK(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "tree,heuristic,p,mem_ratio,status,makespan,peak_memory,norm_makespan,norm_memory");
    std::remove("bench_test_report.json");
    std::remove("bench_test_report.csv");
}

TEST_CASE("parallel bench execution matches the sequential one") {
    BenchConfig config = tiny_config("");
    const BenchReport seq = run_bench(config);
    config.jobs = 4;
    const BenchReport par = run_bench(config);
    CHECK(seq.csv == par.csv);
    CHECK(seq.json == par.json);
}
