#include <algorithm>
#include <cstring>
#include <future>

#include "hetgraph/sim.hpp"

namespace hetgraph {

namespace {

struct SimTask {
  PipelineKind kind;
  std::uint32_t pipeline_id;
  std::uint32_t task_id;
  std::vector<MemberSlice> slices;
  VertexId vtx_lo, vtx_hi;
};

std::vector<MemberSlice> window_range_to_slices(const Partition& part, std::uint32_t w_lo,
                                                std::uint32_t w_hi) {
  if (w_lo >= w_hi) return {};
  MemberSlice s;
  s.part = &part;
  s.edge_lo = part.windows.at(w_lo).edge_lo;
  s.edge_hi = part.windows.at(w_hi - 1).edge_hi;
  return {s};
}

// Maps a window range over a merged group's concatenated window list back
// to per-member edge slices.
std::vector<MemberSlice> group_range_to_slices(const std::vector<Partition>& parts,
                                               const std::vector<std::uint32_t>& group,
                                               std::uint32_t w_lo, std::uint32_t w_hi) {
  std::vector<MemberSlice> out;
  std::uint32_t base = 0;
  for (std::uint32_t id : group) {
    const Partition& p = parts[id];
    std::uint32_t n = static_cast<std::uint32_t>(p.windows.size());
    std::uint32_t lo = std::max(w_lo, base);
    std::uint32_t hi = std::min(w_hi, base + n);
    if (lo < hi) {
      auto slices = window_range_to_slices(p, lo - base, hi - base);
      out.insert(out.end(), slices.begin(), slices.end());
    }
    base += n;
  }
  return out;
}

std::vector<std::vector<SimTask>> tasks_from_plan(const std::vector<Partition>& parts,
                                                  const SchedulePlan& plan) {
  std::vector<std::vector<SimTask>> per_pipeline(plan.num_pipelines());
  for (std::uint32_t p = 0; p < plan.num_little; ++p) {
    std::uint32_t task_id = 0;
    for (const SubPartition& sp : plan.little_assignments[p]) {
      SimTask t;
      t.kind = PipelineKind::Little;
      t.pipeline_id = p;
      t.task_id = task_id++;
      t.slices = window_range_to_slices(parts[sp.parent], sp.window_lo, sp.window_hi);
      t.vtx_lo = parts[sp.parent].vtx_lo;
      t.vtx_hi = parts[sp.parent].vtx_hi;
      per_pipeline[p].push_back(std::move(t));
    }
  }
  for (std::uint32_t p = 0; p < plan.num_big; ++p) {
    std::uint32_t task_id = 0;
    for (const SubPartition& sp : plan.big_assignments[p]) {
      const auto& group = plan.merged_groups.at(sp.parent);
      SimTask t;
      t.kind = PipelineKind::Big;
      t.pipeline_id = plan.num_little + p;
      t.task_id = task_id++;
      t.slices = group_range_to_slices(parts, group, sp.window_lo, sp.window_hi);
      t.vtx_lo = parts[group.front()].vtx_lo;
      t.vtx_hi = parts[group.back()].vtx_hi;
      per_pipeline[plan.num_little + p].push_back(std::move(t));
    }
  }
  return per_pipeline;
}

struct PipelineRun {
  std::vector<TaskResult> results;
  std::int64_t cycles = 0;
  ChannelCounters edge_counters, prop_counters;
};

PipelineRun run_pipeline(const std::vector<SimTask>& tasks, const std::vector<PropValue>& props,
                         const Config& config, const GasUdf& udf, const SimParams& sim) {
  const PipelineConfig& cfg = config.pipeline;
  PipelineChannels ch{
      Channel(config.platform.channel_capacity, config.memory, cfg.block_bytes()),
      Channel(config.platform.channel_capacity, config.memory, cfg.block_bytes())};

  // Lay out the property replica; padding the tail block keeps writes
  // block-aligned. Running past the channel capacity raises the
  // out-of-memory condition before any task runs.
  std::uint64_t prop_bytes = static_cast<std::uint64_t>(props.size()) * cfg.prop_bytes();
  std::uint64_t padded = (prop_bytes + cfg.block_bytes() - 1) / cfg.block_bytes() * cfg.block_bytes();
  std::vector<std::byte> image(padded);
  if (prop_bytes > 0) std::memcpy(image.data(), props.data(), prop_bytes);
  ch.props.write_blocks(0, image);

  std::uint64_t edge_bytes = 0;
  for (const SimTask& t : tasks) {
    for (const MemberSlice& s : t.slices) edge_bytes += (s.edge_hi - s.edge_lo) * (cfg.s_e / 8);
  }
  if (edge_bytes > config.platform.channel_capacity) {
    throw Error("channel out of memory: edge stream needs " + std::to_string(edge_bytes) +
                " bytes, capacity is " + std::to_string(config.platform.channel_capacity));
  }

  PipelineRun run;
  for (const SimTask& t : tasks) {
    TaskResult r = t.kind == PipelineKind::Little
                       ? run_little(t.slices.at(0), cfg, ch, udf, sim)
                       : run_big(t.slices, t.vtx_lo, t.vtx_hi, cfg, ch, udf, sim);
    r.trace.pipeline_id = t.pipeline_id;
    r.trace.task_id = t.task_id;
    run.cycles += r.trace.cycles_total;
    run.results.push_back(std::move(r));
  }
  run.edge_counters = {ch.edges.reads_issued(), ch.edges.blocks_transferred(),
                       cycles_from_q(ch.edges.cycles_busy_q())};
  run.prop_counters = {ch.props.reads_issued(), ch.props.blocks_transferred(),
                       cycles_from_q(ch.props.cycles_busy_q())};
  return run;
}

}  // namespace

ApplyResult run_apply(const std::vector<GatherOutput>& outputs,
                      const std::vector<PropValue>& old_props,
                      const std::vector<std::uint32_t>& out_degree, const GasUdf& udf,
                      const PipelineConfig& cfg, std::uint32_t n_res) {
  HG_CHECK(old_props.size() == out_degree.size(), "property and degree arrays must match");
  const std::size_t v = old_props.size();
  std::vector<PropValue> acc(v, udf.identity);
  for (const GatherOutput& out : outputs) {
    HG_CHECK(out.vtx_hi <= v && out.values.size() == out.vtx_hi - out.vtx_lo,
             "gather output does not fit the property array");
    for (VertexId i = out.vtx_lo; i < out.vtx_hi; ++i) {
      acc[i] = udf.gather(acc[i], out.values[i - out.vtx_lo]);
    }
  }

  ApplyResult res;
  res.props.resize(v);
  for (std::size_t i = 0; i < v; ++i) {
    res.props[i] = udf.apply(acc[i], old_props[i], out_degree[i]);
  }

  std::uint64_t v_blocks = v == 0 ? 0
                                  : (v * cfg.prop_bytes() + cfg.block_bytes() - 1) / cfg.block_bytes();
  std::uint32_t ports = std::max(1u, n_res);
  res.apply_cycles = static_cast<std::int64_t>((v_blocks + ports - 1) / ports);
  res.writer_cycles = static_cast<std::int64_t>(v_blocks);  // replicas overlap across channels
  return res;
}

IterationResult run_iteration(const std::vector<Partition>& parts, const SchedulePlan& plan,
                              const std::vector<PropValue>& props,
                              const std::vector<std::uint32_t>& out_degree,
                              const Config& config, const GasUdf& udf, const SimParams& sim) {
  validate_plan(plan, parts);
  auto per_pipeline = tasks_from_plan(parts, plan);

  std::vector<PipelineRun> runs(per_pipeline.size());
  if (sim.threaded && per_pipeline.size() > 1) {
    std::vector<std::future<PipelineRun>> futures;
    futures.reserve(per_pipeline.size());
    for (const auto& tasks : per_pipeline) {
      futures.push_back(std::async(std::launch::async, [&tasks, &props, &config, &udf, &sim] {
        return run_pipeline(tasks, props, config, udf, sim);
      }));
    }
    for (std::size_t i = 0; i < futures.size(); ++i) runs[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < per_pipeline.size(); ++i) {
      runs[i] = run_pipeline(per_pipeline[i], props, config, udf, sim);
    }
  }

  IterationResult result;
  std::int64_t max_pipeline = 0;
  std::vector<GatherOutput> outputs;
  for (auto& run : runs) {
    max_pipeline = std::max(max_pipeline, run.cycles);
    for (auto& r : run.results) {
      outputs.push_back(std::move(r.output));
      result.traces.push_back(std::move(r.trace));
    }
    result.edge_channels.push_back(run.edge_counters);
    result.prop_channels.push_back(run.prop_counters);
  }

  ApplyResult applied = run_apply(outputs, props, out_degree, udf, config.pipeline,
                                  config.platform.n_res);
  result.props = std::move(applied.props);
  result.apply_cycles = applied.apply_cycles;
  result.writer_cycles = applied.writer_cycles;
  result.makespan = max_pipeline + applied.apply_cycles + applied.writer_cycles;
  return result;
}

}  // namespace hetgraph
