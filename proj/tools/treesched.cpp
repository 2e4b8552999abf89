// treesched: memory-aware scheduling of tree-shaped task graphs.
//
// Exit codes: 0 success, 1 input error, 2 infeasible memory limit
// (a memory-limited heuristic could not run).

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treesched/bench.hpp"
#include "treesched/bounds.hpp"
#include "treesched/generators.hpp"
#include "treesched/schedulers.hpp"
#include "treesched/sequential.hpp"
#include "treesched/simulator.hpp"
#include "treesched/transforms.hpp"
#include "treesched/tree.hpp"

namespace {

using namespace treesched;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

nlohmann::json bounds_json(const BoundsReport& b) {
    return {{"work_over_p", b.work_over_p.to_string()},
            {"critical_path", b.critical_path},
            {"makespan_lb", b.makespan_lb.to_string()},
            {"mem_time_product_lb", b.mem_time_product_lb}};
}

std::string schedule_text(const TaskTree& tree, const Schedule& sched) {
    std::string out = "# schedule p=" + std::to_string(sched.processors) + "\n";
    for (NodeId id = 1; id <= tree.size(); ++id)
        out += std::to_string(id) + " " + std::to_string(sched.start_of(id)) + " " +
               std::to_string(sched.proc_of(id)) + "\n";
    return out;
}

std::string trace_text(const EvalReport& report) {
    std::string out = "# time memory\n";
    for (const TracePoint& p : report.trace)
        out += std::to_string(p.time) + " " + std::to_string(p.memory) + "\n";
    return out;
}

int cmd_validate(const std::string& path) {
    const TaskTree tree = load_tree(path);
    int leaves = 0;
    for (NodeId id = 1; id <= tree.size(); ++id)
        if (tree.is_leaf(id)) ++leaves;
    std::cout << "ok: " << tree.size() << " nodes, " << leaves << " leaves, root "
              << tree.root() << "\n";
    return 0;
}

int cmd_stats(const std::string& path) {
    const TaskTree tree = load_tree(path);
    const std::vector<TimeUnits> d = depths(tree);
    int leaves = 0, max_degree = 0;
    MemUnits max_node_mem = 0, total_files = 0;
    for (NodeId id = 1; id <= tree.size(); ++id) {
        if (tree.is_leaf(id)) ++leaves;
        max_degree = std::max(max_degree, static_cast<int>(tree.children(id).size()));
        max_node_mem = std::max(max_node_mem, tree.node_memory(id));
        total_files += tree.node(id).f;
    }
    const PostorderResult po = optimal_postorder(tree);
    nlohmann::json j = {
        {"nodes", tree.size()},
        {"leaves", leaves},
        {"max_degree", max_degree},
        {"critical_path", *std::max_element(d.begin(), d.end())},
        {"total_work", tree.total_work()},
        {"total_output_size", total_files},
        {"max_node_memory", max_node_mem},
        {"postorder_peak", po.peak},
    };
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_bounds(const std::string& path, int p) {
    const TaskTree tree = load_tree(path);
    std::cout << bounds_json(compute_bounds(tree, p)).dump(2) << "\n";
    return 0;
}

int cmd_schedule(const std::string& path, const std::string& heuristic, int p,
                 std::optional<double> mem, std::optional<double> mem_ratio,
                 const std::string& emit_schedule, const std::string& emit_trace) {
    const TaskTree tree = load_tree(path);
    const auto h = parse_heuristic(heuristic);
    if (!h) {
        std::cerr << "unknown heuristic: " << heuristic << "\n  known:";
        for (const std::string& n : heuristic_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return 1;
    }

    std::optional<MemUnits> limit;
    double ratio = 0.0;
    if (is_memory_limited(*h)) {
        if (mem.has_value() == mem_ratio.has_value()) {
            std::cerr << "heuristic " << heuristic << " needs exactly one of --mem / --mem-ratio\n";
            return 1;
        }
        if (mem) {
            limit = static_cast<MemUnits>(*mem);
        } else {
            const MemUnits reference = optimal_postorder(tree).peak;
            ratio = *mem_ratio;
            limit = static_cast<MemUnits>(*mem_ratio * static_cast<double>(reference));
        }
    } else if (mem || mem_ratio) {
        std::cerr << "heuristic " << heuristic << " does not take a memory limit\n";
        return 1;
    }

    RunResult result = run_one(tree, *h, p, limit);
    result.mem_ratio = ratio;

    nlohmann::json j = {{"heuristic", heuristic}, {"p", p}, {"status", result.status}};
    if (limit) j["mem_limit"] = *limit;
    if (ratio > 0) j["mem_ratio"] = ratio;
    j["bounds"] = bounds_json(result.bounds);
    if (result.ok()) {
        j["makespan"] = result.report.makespan;
        j["peak_memory"] = result.report.peak_memory;
        j["norm_makespan"] = result.report.normalized_makespan;
        j["norm_memory"] = result.report.normalized_memory;
        if (!emit_schedule.empty()) write_file(emit_schedule, schedule_text(tree, result.schedule));
        if (!emit_trace.empty()) write_file(emit_trace, trace_text(result.report));
    }
    std::cout << j.dump(2) << "\n";
    return result.ok() ? 0 : 2;
}

int cmd_transform(const std::string& path, bool reduction, const std::string& out_path,
                  const std::string& map_path) {
    const TaskTree tree = load_tree(path);
    if (!reduction) {
        std::cerr << "transform: pass --reduction to apply the reduction pipeline\n";
        return 1;
    }
    TransformResult no_exec = eliminate_execution_files(tree);
    TransformResult reduced = to_reduction_tree(no_exec.tree);
    const TransformMap total = TransformMap::compose(no_exec.map, reduced.map);
    const std::string text = serialize_tree(reduced.tree);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    if (!map_path.empty()) write_file(map_path, serialize_transform_map(total));
    return 0;
}

int cmd_generate(const GenSpec& spec, const std::string& out_path) {
    const TaskTree tree = generate(spec);
    const std::string text = spec.to_comment() + "\n" + serialize_tree(tree);
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
    return 0;
}

int cmd_bench(const std::string& config_path) {
    const BenchConfig config = BenchConfig::load(config_path);
    const BenchReport report = run_bench(config);
    int did_not_run = 0;
    for (const RunResult& r : report.rows)
        if (!r.ok()) ++did_not_run;
    std::cerr << report.rows.size() << " runs, " << did_not_run << " did not run; report at "
              << config.output << ".{json,csv}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memory-aware scheduling of tree-shaped task graphs"};
    app.require_subcommand(1);

    std::string tree_path, heuristic, emit_schedule, emit_trace, out_path, map_path, config_path;
    int p = 1;
    std::optional<double> mem, mem_ratio;
    bool reduction = false;
    GenSpec spec;
    std::string params_csv;

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a tree file");
    validate->add_option("tree", tree_path)->required();

    CLI::App* stats = app.add_subcommand("stats", "print tree statistics");
    stats->add_option("tree", tree_path)->required();

    CLI::App* bounds = app.add_subcommand("bounds", "print makespan and memory lower bounds");
    bounds->add_option("tree", tree_path)->required();
    bounds->add_option("-p,--processors", p)->required();

    CLI::App* schedule = app.add_subcommand("schedule", "run one heuristic and evaluate it");
    schedule->add_option("tree", tree_path)->required();
    schedule->add_option("--heuristic", heuristic)->required();
    schedule->add_option("-p,--processors", p)->required();
    schedule->add_option("--mem", mem, "absolute memory limit");
    schedule->add_option("--mem-ratio", mem_ratio, "limit as a multiple of the postorder peak");
    schedule->add_option("--emit-schedule", emit_schedule);
    schedule->add_option("--emit-trace", emit_trace);

    CLI::App* transform = app.add_subcommand("transform", "rewrite a tree for the memory-limited engines");
    transform->add_option("tree", tree_path)->required();
    transform->add_flag("--reduction", reduction,
                        "eliminate execution files and enforce the reduction property");
    transform->add_option("-o,--output", out_path);
    transform->add_option("--emit-map", map_path, "write the node mapping file");

    CLI::App* generate_cmd = app.add_subcommand("generate", "emit a synthetic tree");
    generate_cmd->add_option("--family", spec.family)->required()->check(CLI::IsMember(GenSpec::known_families()));
    generate_cmd->add_option("--params", params_csv, "comma-separated integer parameters");
    generate_cmd->add_option("--seed", spec.seed);
    generate_cmd->add_option("-o,--output", out_path);

    CLI::App* bench = app.add_subcommand("bench", "run a benchmark config");
    bench->add_option("--config", config_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(tree_path);
        if (app.got_subcommand(stats)) return cmd_stats(tree_path);
        if (app.got_subcommand(bounds)) return cmd_bounds(tree_path, p);
        if (app.got_subcommand(schedule))
            return cmd_schedule(tree_path, heuristic, p, mem, mem_ratio, emit_schedule,
                                emit_trace);
        if (app.got_subcommand(transform))
            return cmd_transform(tree_path, reduction, out_path, map_path);
        if (app.got_subcommand(generate_cmd)) {
            if (!params_csv.empty()) {
                std::stringstream ss(params_csv);
                std::string tok;
                while (std::getline(ss, tok, ',')) spec.params.push_back(std::stoll(tok));
            }
            return cmd_generate(spec, out_path);
        }
        if (app.got_subcommand(bench)) return cmd_bench(config_path);
    } catch (const MemoryLimitError& e) {
        std::cerr << "did-not-run: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
