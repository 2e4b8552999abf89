#include <benchmark/benchmark.h>

#include "treesched/generators.hpp"
#include "treesched/schedulers.hpp"
#include "treesched/sequential.hpp"
#include "treesched/simulator.hpp"
#include "treesched/transforms.hpp"

using namespace treesched;

namespace {

TaskTree make_tree(int n) {
    AssemblyParams params;
    params.n_target = n;
    params.eta_min = 1;
    params.eta_max = 5;
    params.mu_min = 2;
    params.mu_max = 8;
    params.max_degree = 6;
    params.depth_bias = 1;
    return gen_random_assembly(params, 42);
}

TaskTree make_reduction_tree(int n) {
    return to_reduction_tree(eliminate_execution_files(make_tree(n)).tree).tree;
}

void BM_OptimalPostorder(benchmark::State& state) {
    const TaskTree tree = make_tree(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(optimal_postorder(tree).peak);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OptimalPostorder)->Range(256, 16384)->Complexity();

void BM_SplitSubtrees(benchmark::State& state) {
    const TaskTree tree = make_tree(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(split_subtrees(tree, 8).chosen_rank);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SplitSubtrees)->Range(256, 16384)->Complexity();

void BM_ListSchedule(benchmark::State& state) {
    const TaskTree tree = make_tree(static_cast<int>(state.range(0)));
    const NodeOrder order = order_deepest_first(tree);
    for (auto _ : state) benchmark::DoNotOptimize(list_schedule(tree, 8, order).processors);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ListSchedule)->Range(256, 16384)->Complexity();

void BM_MemLimitSchedule(benchmark::State& state) {
    const TaskTree tree = make_reduction_tree(static_cast<int>(state.range(0)));
    const NodeOrder order = order_inner_first(tree);
    const MemUnits limit = optimal_postorder(tree).peak;
    for (auto _ : state)
        benchmark::DoNotOptimize(list_schedule_mem_limit(tree, 8, order, limit).processors);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MemLimitSchedule)->Range(256, 16384)->Complexity();

void BM_MemBooking(benchmark::State& state) {
    const TaskTree tree = make_reduction_tree(static_cast<int>(state.range(0)));
    const PostorderResult po = optimal_postorder(tree);
    for (auto _ : state)
        benchmark::DoNotOptimize(mem_booking_inner_first(tree, 8, po.order, po.peak).processors);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MemBooking)->Range(256, 16384)->Complexity();

void BM_Evaluate(benchmark::State& state) {
    const TaskTree tree = make_tree(static_cast<int>(state.range(0)));
    const Schedule sched = list_schedule(tree, 8, order_deepest_first(tree));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(tree, sched).peak_memory);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Evaluate)->Range(256, 16384)->Complexity();

}  // namespace

BENCHMARK_MAIN();
