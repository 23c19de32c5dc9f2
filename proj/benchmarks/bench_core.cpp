#include <benchmark/benchmark.h>

#include "hetgraph/cost_model.hpp"
#include "hetgraph/graph_io.hpp"
#include "hetgraph/kernels.hpp"
#include "hetgraph/rmat.hpp"

using namespace hetgraph;

namespace {

PreprocessedGraph make_input(std::uint32_t scale) {
  return preprocess(generate_rmat({scale, 16, 42}), (1u << scale) / 8, true);
}

void BM_preprocess(benchmark::State& state) {
  Graph g = generate_rmat({static_cast<std::uint32_t>(state.range(0)), 16, 42});
  for (auto _ : state) {
    Graph copy = g;
    auto pg = preprocess(std::move(copy), (1u << state.range(0)) / 8, true);
    benchmark::DoNotOptimize(pg.partitions.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}
BENCHMARK(BM_preprocess)->Arg(12)->Arg(14);

void BM_estimate_partitions(benchmark::State& state) {
  auto pg = make_input(static_cast<std::uint32_t>(state.range(0)));
  PipelineConfig cfg;
  cfg.set_partition_capacity(pg.interval_size);
  MemoryLatencyModel mem = MemoryLatencyModel::from_coeffs(0.02, 32, 2, 128);
  for (auto _ : state) {
    std::int64_t total = 0;
    for (const Partition& p : pg.partitions) {
      total += estimate_partition(p, PipelineKind::Little, cfg, mem).total;
      total += estimate_partition(p, PipelineKind::Big, cfg, mem).total;
    }
    benchmark::DoNotOptimize(total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pg.graph.num_edges()));
}
BENCHMARK(BM_estimate_partitions)->Arg(12)->Arg(14);

void BM_plan(benchmark::State& state) {
  auto pg = make_input(12);
  Config cfg;
  cfg.pipeline.set_partition_capacity(pg.interval_size);
  build_windows(pg.partitions, 4096);
  for (auto _ : state) {
    SchedulePlan plan = plan_schedule(pg.partitions, cfg.pipeline, cfg.memory, 14);
    benchmark::DoNotOptimize(plan.est_makespan);
  }
}
BENCHMARK(BM_plan);

void BM_simulate_iteration(benchmark::State& state) {
  auto pg = make_input(static_cast<std::uint32_t>(state.range(0)));
  Config cfg;
  cfg.pipeline.set_partition_capacity(pg.interval_size);
  build_windows(pg.partitions, 4096);
  SchedulePlan plan = plan_schedule(pg.partitions, cfg.pipeline, cfg.memory, 8);
  GasUdf udf = pagerank_udf();
  auto props = pagerank_initial(pg.graph);
  for (auto _ : state) {
    IterationResult r =
        run_iteration(pg.partitions, plan, props, pg.graph.out_degree, cfg, udf, SimParams{});
    benchmark::DoNotOptimize(r.makespan);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pg.graph.num_edges()));
}
BENCHMARK(BM_simulate_iteration)->Arg(12)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
