#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treesched/bounds.hpp"
#include "treesched/generators.hpp"
#include "treesched/schedule.hpp"
#include "treesched/simulator.hpp"
#include "treesched/tree.hpp"

namespace treesched {

enum class Heuristic {
    ParSubtrees,
    ParSubtreesOptim,
    ParInnerFirst,
    ParDeepestFirst,
    ParInnerFirstMemLimit,
    ParInnerFirstMemLimitOptim,
    ParDeepestFirstMemLimit,
    ParDeepestFirstMemLimitOptim,
    MemBookingInnerFirst,
};

const std::vector<std::string>& heuristic_names();
std::optional<Heuristic> parse_heuristic(const std::string& name);
const std::string& heuristic_name(Heuristic h);
bool is_memory_limited(Heuristic h);

/// Outcome of one (tree, heuristic, p, memory) cell. A refused memory limit
/// yields status "did-not-run" instead of a schedule.
struct RunResult {
    std::string tree_name;
    Heuristic heuristic = Heuristic::ParSubtrees;
    int p = 1;
    double mem_ratio = 0.0;       // 0 when no limit applies
    MemUnits mem_limit = 0;       // resolved limit, 0 when none
    std::string status;           // "ok" | "did-not-run"
    EvalReport report;            // empty when did-not-run
    BoundsReport bounds;
    MemUnits reference_peak = 0;  // optimal postorder peak of the input tree
    Schedule schedule;            // on the input tree (lifted when transformed)

    bool ok() const { return status == "ok"; }
};

/// Runs one heuristic on a tree. Memory-limited heuristics receive the tree
/// through the reduction pipeline (execution files eliminated, reduction
/// property enforced) and the resulting schedule is lifted back and
/// evaluated on the input tree. Normalizations: makespan against the
/// work/critical-path bound, memory against the input tree's optimal
/// postorder peak.
RunResult run_one(const TaskTree& tree, Heuristic heuristic, int p,
                  std::optional<MemUnits> mem_limit);

/// One corpus entry: a tree file on disk or a generator spec.
struct CorpusEntry {
    std::string name;
    std::string file;  // empty when generated
    std::optional<GenSpec> spec;
};

struct BenchConfig {
    std::vector<CorpusEntry> corpus;
    std::vector<int> processors;
    std::vector<double> memory_ratios;   // limit = ratio * postorder peak
    std::vector<Heuristic> heuristics;
    std::string output = "bench-report";
    int jobs = 1;

    static BenchConfig load(const std::string& path);
};

struct BenchReport {
    std::vector<RunResult> rows;
    std::string json;  // aggregate report
    std::string csv;   // one line per row, same columns
};

/// Evaluates every (tree, heuristic, p, ratio) cell, deterministically
/// ordered; cells run concurrently when config.jobs > 1. Writes
/// `<output>.json` and `<output>.csv` when output is nonempty.
BenchReport run_bench(const BenchConfig& config);

}  // namespace treesched
