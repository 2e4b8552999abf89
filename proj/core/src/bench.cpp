#include "treesched/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "treesched/schedulers.hpp"
#include "treesched/sequential.hpp"
#include "treesched/transforms.hpp"

namespace treesched {

namespace {

const std::vector<std::pair<std::string, Heuristic>>& registry() {
    static const std::vector<std::pair<std::string, Heuristic>> table = {
        {"par-subtrees", Heuristic::ParSubtrees},
        {"par-subtrees-optim", Heuristic::ParSubtreesOptim},
        {"par-inner-first", Heuristic::ParInnerFirst},
        {"par-deepest-first", Heuristic::ParDeepestFirst},
        {"par-inner-first-memlimit", Heuristic::ParInnerFirstMemLimit},
        {"par-inner-first-memlimit-optim", Heuristic::ParInnerFirstMemLimitOptim},
        {"par-deepest-first-memlimit", Heuristic::ParDeepestFirstMemLimit},
        {"par-deepest-first-memlimit-optim", Heuristic::ParDeepestFirstMemLimitOptim},
        {"mem-booking-inner-first", Heuristic::MemBookingInnerFirst},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& heuristic_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, h] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

std::optional<Heuristic> parse_heuristic(const std::string& name) {
    for (const auto& [n, h] : registry())
        if (n == name) return h;
    return std::nullopt;
}

const std::string& heuristic_name(Heuristic h) {
    for (const auto& entry : registry())
        if (entry.second == h) return entry.first;
    throw std::logic_error("unknown heuristic");
}

bool is_memory_limited(Heuristic h) {
    switch (h) {
        case Heuristic::ParSubtrees:
        case Heuristic::ParSubtreesOptim:
        case Heuristic::ParInnerFirst:
        case Heuristic::ParDeepestFirst:
            return false;
        default:
            return true;
    }
}

RunResult run_one(const TaskTree& tree, Heuristic heuristic, int p,
                  std::optional<MemUnits> mem_limit) {
    if (is_memory_limited(heuristic) != mem_limit.has_value())
        throw std::invalid_argument("memory limit must be given exactly for the *-memlimit and "
                                    "mem-booking heuristics");

    RunResult result;
    result.heuristic = heuristic;
    result.p = p;
    result.bounds = compute_bounds(tree, p);
    result.reference_peak = optimal_postorder(tree).peak;

    try {
        switch (heuristic) {
            case Heuristic::ParSubtrees:
                result.schedule = par_subtrees(tree, p, false);
                break;
            case Heuristic::ParSubtreesOptim:
                result.schedule = par_subtrees(tree, p, true);
                break;
            case Heuristic::ParInnerFirst:
                result.schedule = list_schedule(tree, p, order_inner_first(tree));
                break;
            case Heuristic::ParDeepestFirst:
                result.schedule = list_schedule(tree, p, order_deepest_first(tree));
                break;
            default: {
                // Reduction pipeline: drop execution files, enforce the
                // reduction property, schedule, then lift back.
                TransformResult no_exec = eliminate_execution_files(tree);
                TransformResult reduced = to_reduction_tree(no_exec.tree);
                const TaskTree& work = reduced.tree;
                const MemUnits M = *mem_limit;
                result.mem_limit = M;
                Schedule on_reduced;
                switch (heuristic) {
                    case Heuristic::ParInnerFirstMemLimit:
                        on_reduced = list_schedule_mem_limit(work, p, order_inner_first(work), M);
                        break;
                    case Heuristic::ParInnerFirstMemLimitOptim:
                        on_reduced =
                            list_schedule_mem_limit(work, p, order_inner_first(work), M, true);
                        break;
                    case Heuristic::ParDeepestFirstMemLimit:
                        on_reduced =
                            list_schedule_mem_limit(work, p, order_deepest_first(work), M);
                        break;
                    case Heuristic::ParDeepestFirstMemLimitOptim:
                        on_reduced =
                            list_schedule_mem_limit(work, p, order_deepest_first(work), M, true);
                        break;
                    case Heuristic::MemBookingInnerFirst:
                        on_reduced =
                            mem_booking_inner_first(work, p, optimal_postorder(work).order, M);
                        break;
                    default:
                        throw std::logic_error("unhandled heuristic");
                }
                result.schedule =
                    lift_schedule(lift_schedule(on_reduced, reduced.map), no_exec.map);
                break;
            }
        }
    } catch (const MemoryLimitError&) {
        result.status = "did-not-run";
        return result;
    }

    result.status = "ok";
    result.report = evaluate(tree, result.schedule);
    result.report.normalized_makespan =
        static_cast<double>(result.report.makespan) / result.bounds.makespan_lb.value();
    result.report.normalized_memory =
        result.reference_peak == 0
            ? 0.0
            : static_cast<double>(result.report.peak_memory) /
                  static_cast<double>(result.reference_peak);

    // Lemma-level sanity for every emitted row; failures are engine bugs.
    if (!result.bounds.makespan_lb.at_most(result.report.makespan))
        throw std::logic_error("makespan below its lower bound");
    if (static_cast<__int128>(result.report.peak_memory) * result.report.makespan <
        result.bounds.mem_time_product_lb)
        throw std::logic_error("memory-time product below its lower bound");
    return result;
}

BenchConfig BenchConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    nlohmann::json j;
    in >> j;

    BenchConfig config;
    for (const auto& entry : j.at("corpus")) {
        CorpusEntry ce;
        if (entry.is_string()) {
            ce.file = entry.get<std::string>();
            ce.name = ce.file;
        } else if (entry.contains("file")) {
            ce.file = entry.at("file").get<std::string>();
            ce.name = entry.value("name", ce.file);
        } else {
            GenSpec spec;
            spec.family = entry.at("family").get<std::string>();
            for (const auto& v : entry.value("params", nlohmann::json::array()))
                spec.params.push_back(v.get<std::int64_t>());
            spec.seed = entry.value("seed", 0ull);
            ce.spec = spec;
            ce.name = entry.value("name", spec.family + "-" + std::to_string(spec.seed));
        }
        config.corpus.push_back(std::move(ce));
    }
    for (const auto& v : j.at("processors")) config.processors.push_back(v.get<int>());
    for (const auto& v : j.value("memory_ratios", nlohmann::json::array()))
        config.memory_ratios.push_back(v.get<double>());
    for (const auto& v : j.at("heuristics")) {
        const std::string name = v.get<std::string>();
        auto h = parse_heuristic(name);
        if (!h) throw std::runtime_error("unknown heuristic in config: " + name);
        config.heuristics.push_back(*h);
    }
    config.output = j.value("output", std::string("bench-report"));
    config.jobs = j.value("jobs", 1);

    for (Heuristic h : config.heuristics)
        if (is_memory_limited(h) && config.memory_ratios.empty())
            throw std::runtime_error("memory_ratios required for heuristic " + heuristic_name(h));
    for (double r : config.memory_ratios)
        if (r < 1.0) throw std::runtime_error("memory ratios must be >= 1");
    return config;
}

namespace {

struct Cell {
    int tree_index;
    Heuristic heuristic;
    int p;
    double ratio;  // 0 for unlimited heuristics
};

std::string csv_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
    std::vector<TaskTree> trees;
    std::vector<MemUnits> reference;
    trees.reserve(config.corpus.size());
    for (const CorpusEntry& entry : config.corpus) {
        trees.push_back(entry.spec ? generate(*entry.spec) : load_tree(entry.file));
        reference.push_back(optimal_postorder(trees.back()).peak);
    }

    std::vector<Cell> cells;
    for (int ti = 0; ti < static_cast<int>(trees.size()); ++ti)
        for (Heuristic h : config.heuristics)
            for (int p : config.processors) {
                if (is_memory_limited(h))
                    for (double r : config.memory_ratios) cells.push_back({ti, h, p, r});
                else
                    cells.push_back({ti, h, p, 0.0});
            }

    std::vector<RunResult> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            const TaskTree& tree = trees[cell.tree_index];
            std::optional<MemUnits> limit;
            if (is_memory_limited(cell.heuristic))
                limit = static_cast<MemUnits>(
                    std::llround(std::floor(cell.ratio * static_cast<double>(reference[cell.tree_index]))));
            RunResult r = run_one(tree, cell.heuristic, cell.p, limit);
            r.tree_name = config.corpus[cell.tree_index].name;
            r.mem_ratio = cell.ratio;
            rows[i] = std::move(r);
        }
    };
    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    BenchReport bench;
    bench.rows = std::move(rows);

    // Flat CSV, one row per cell in deterministic cell order.
    std::string csv = "tree,heuristic,p,mem_ratio,status,makespan,peak_memory,norm_makespan,norm_memory\n";
    nlohmann::json jrows = nlohmann::json::array();
    for (const RunResult& r : bench.rows) {
        const std::string ratio = is_memory_limited(r.heuristic) ? csv_double(r.mem_ratio) : "";
        csv += r.tree_name + "," + heuristic_name(r.heuristic) + "," + std::to_string(r.p) + "," +
               ratio + "," + r.status + ",";
        nlohmann::json jr = {{"tree", r.tree_name},
                             {"heuristic", heuristic_name(r.heuristic)},
                             {"p", r.p},
                             {"status", r.status}};
        if (is_memory_limited(r.heuristic)) {
            jr["mem_ratio"] = r.mem_ratio;
            jr["mem_limit"] = r.mem_limit;
        } else {
            jr["mem_ratio"] = nullptr;
        }
        if (r.ok()) {
            csv += std::to_string(r.report.makespan) + "," + std::to_string(r.report.peak_memory) +
                   "," + csv_double(r.report.normalized_makespan) + "," +
                   csv_double(r.report.normalized_memory);
            jr["makespan"] = r.report.makespan;
            jr["peak_memory"] = r.report.peak_memory;
            jr["norm_makespan"] = r.report.normalized_makespan;
            jr["norm_memory"] = r.report.normalized_memory;
        } else {
            csv += ",,,";
            jr["makespan"] = nullptr;
            jr["peak_memory"] = nullptr;
            jr["norm_makespan"] = nullptr;
            jr["norm_memory"] = nullptr;
        }
        csv += '\n';
        jrows.push_back(std::move(jr));
    }

    // Aggregates: per heuristic means over its ok rows, success rates per
    // ratio, and best / within-5% memory and makespan shares per (tree, p)
    // scenario, each heuristic entering a scenario with its best row.
    struct Agg {
        double norm_mem_sum = 0, norm_mk_sum = 0;
        int ok_rows = 0;
        int best_mem = 0, within5_mem = 0, best_mk = 0, within5_mk = 0;
        int scenarios = 0;
        std::map<double, std::pair<int, int>> per_ratio;  // ratio -> (ok, total)
    };
    std::map<Heuristic, Agg> aggs;
    for (const RunResult& r : bench.rows) {
        Agg& a = aggs[r.heuristic];
        if (is_memory_limited(r.heuristic)) {
            auto& [ok, total] = a.per_ratio[r.mem_ratio];
            ++total;
            if (r.ok()) ++ok;
        }
        if (r.ok()) {
            ++a.ok_rows;
            a.norm_mem_sum += r.report.normalized_memory;
            a.norm_mk_sum += r.report.normalized_makespan;
        }
    }
    // Scenario table keyed by (tree, p).
    std::map<std::pair<std::string, int>, std::map<Heuristic, std::pair<MemUnits, TimeUnits>>>
        best_rows;
    for (const RunResult& r : bench.rows) {
        if (!r.ok()) continue;
        auto& slot = best_rows[{r.tree_name, r.p}];
        auto it = slot.find(r.heuristic);
        if (it == slot.end()) {
            slot[r.heuristic] = {r.report.peak_memory, r.report.makespan};
        } else {
            it->second.first = std::min(it->second.first, r.report.peak_memory);
            it->second.second = std::min(it->second.second, r.report.makespan);
        }
    }
    for (const auto& [key, by_heuristic] : best_rows) {
        MemUnits best_mem = 0;
        TimeUnits best_mk = 0;
        bool first = true;
        for (const auto& [h, vals] : by_heuristic) {
            if (first || vals.first < best_mem) best_mem = vals.first;
            if (first || vals.second < best_mk) best_mk = vals.second;
            first = false;
        }
        for (const auto& [h, vals] : by_heuristic) {
            Agg& a = aggs[h];
            ++a.scenarios;
            if (vals.first == best_mem) ++a.best_mem;
            if (static_cast<double>(vals.first) <= 1.05 * static_cast<double>(best_mem))
                ++a.within5_mem;
            if (vals.second == best_mk) ++a.best_mk;
            if (static_cast<double>(vals.second) <= 1.05 * static_cast<double>(best_mk))
                ++a.within5_mk;
        }
    }

    nlohmann::json jagg;
    for (const auto& [h, a] : aggs) {
        nlohmann::json ja;
        ja["ok_rows"] = a.ok_rows;
        ja["mean_norm_memory"] = a.ok_rows ? a.norm_mem_sum / a.ok_rows : 0.0;
        ja["mean_norm_makespan"] = a.ok_rows ? a.norm_mk_sum / a.ok_rows : 0.0;
        if (a.scenarios) {
            ja["best_memory_share"] = static_cast<double>(a.best_mem) / a.scenarios;
            ja["within5_memory_share"] = static_cast<double>(a.within5_mem) / a.scenarios;
            ja["best_makespan_share"] = static_cast<double>(a.best_mk) / a.scenarios;
            ja["within5_makespan_share"] = static_cast<double>(a.within5_mk) / a.scenarios;
        }
        if (!a.per_ratio.empty()) {
            nlohmann::json jr;
            for (const auto& [ratio, counts] : a.per_ratio)
                jr[csv_double(ratio)] =
                    counts.second ? static_cast<double>(counts.first) / counts.second : 0.0;
            ja["success_rate"] = jr;
        }
        jagg[heuristic_name(h)] = std::move(ja);
    }

    nlohmann::json out;
    out["schema_version"] = 1;
    out["rows"] = std::move(jrows);
    out["aggregates"] = std::move(jagg);
    bench.json = out.dump(2);
    bench.csv = std::move(csv);

    if (!config.output.empty()) {
        std::ofstream jf(config.output + ".json", std::ios::binary);
        jf << bench.json << '\n';
        std::ofstream cf(config.output + ".csv", std::ios::binary);
        cf << bench.csv;
    }
    return bench;
}

}  // namespace treesched
