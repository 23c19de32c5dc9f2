#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hetgraph/config.hpp"
#include "hetgraph/cost_model.hpp"
#include "hetgraph/memory.hpp"
#include "hetgraph/partition.hpp"
#include "hetgraph/scheduler.hpp"
#include "hetgraph/udf.hpp"

namespace hetgraph {

struct SimParams {
  /// Cycles lost to emptying the pipeline and enqueuing the next task.
  std::int64_t switch_overhead = 2000;
  bool threaded = false;
};

struct PipelineTrace {
  std::uint32_t pipeline_id = 0;
  PipelineKind kind = PipelineKind::Little;
  std::uint32_t task_id = 0;
  std::int64_t cycles_total = 0;
  std::uint64_t mem_requests = 0;
  std::uint64_t edges_processed = 0;
  std::map<std::string, std::int64_t> stall_cycles_by_cause;
};

/// Accumulated gather-buffer contents of one task, ready for Apply.
/// Little tasks deliver the merged replica over the partition interval;
/// Big tasks deliver the group's union interval, PE k having owned the
/// residue class v mod n_gpe == k.
struct GatherOutput {
  VertexId vtx_lo = 0;
  VertexId vtx_hi = 0;
  bool interleaved = false;
  std::vector<PropValue> values;
};

/// Contiguous edge range of one partition, the unit a task streams.
struct MemberSlice {
  const Partition* part = nullptr;
  std::uint64_t edge_lo = 0;
  std::uint64_t edge_hi = 0;
};

/// The two memory ports a pipeline occupies: one streams edges, the other
/// serves vertex properties (reads during Scatter, the Apply write behind
/// the same wrapper is charged globally).
struct PipelineChannels {
  Channel edges;
  Channel props;
};

struct TaskResult {
  GatherOutput output;
  PipelineTrace trace;
};

/// Little pipeline: burst edge stream, ping-pong buffered property reads,
/// static round-robin dispatch to n_gpe replicated gather buffers, merged
/// at task end.
TaskResult run_little(const MemberSlice& slice, const PipelineConfig& cfg,
                      PipelineChannels& ch, const GasUdf& udf, const SimParams& sim);

/// Big pipeline: Vertex Loader request deduplication against the cached
/// last block, clamped strided read latency per issue set, dynamic routing
/// by dst mod n_gpe with per-PE II=1 drain.
TaskResult run_big(const std::vector<MemberSlice>& slices, VertexId union_lo,
                   VertexId union_hi, const PipelineConfig& cfg, PipelineChannels& ch,
                   const GasUdf& udf, const SimParams& sim);

struct ApplyResult {
  std::vector<PropValue> props;
  std::int64_t apply_cycles = 0;
  std::int64_t writer_cycles = 0;
};

/// Folds task outputs with the gather operator (any order; gather is
/// associative-commutative) and applies the per-vertex finalizer.
/// Untouched vertices see the identity accumulator.
ApplyResult run_apply(const std::vector<GatherOutput>& outputs,
                      const std::vector<PropValue>& old_props,
                      const std::vector<std::uint32_t>& out_degree, const GasUdf& udf,
                      const PipelineConfig& cfg, std::uint32_t n_res);

struct ChannelCounters {
  std::uint64_t reads_issued = 0;
  std::uint64_t blocks_transferred = 0;
  std::int64_t busy_cycles = 0;
};

struct IterationResult {
  std::vector<PropValue> props;
  std::vector<PipelineTrace> traces;  // task order: Little pipelines, then Big
  std::int64_t makespan = 0;          // max per-pipeline cycles + apply + writer
  std::int64_t apply_cycles = 0;
  std::int64_t writer_cycles = 0;
  std::vector<ChannelCounters> edge_channels;  // per pipeline
  std::vector<ChannelCounters> prop_channels;
};

/// One full Scatter/Gather -> Apply -> Writer pass under a plan. Pipelines
/// run conceptually in parallel (optionally on worker threads); results are
/// bit-identical to sequential execution.
IterationResult run_iteration(const std::vector<Partition>& parts, const SchedulePlan& plan,
                              const std::vector<PropValue>& props,
                              const std::vector<std::uint32_t>& out_degree,
                              const Config& config, const GasUdf& udf, const SimParams& sim);

/// Dedup rule of the Vertex Loader's request pipeline: position i issues a
/// request iff its block differs from position i-1's block, with `carry`
/// (the cached last request, kInvalidBlock when cold) standing in at i=0.
constexpr std::uint64_t kInvalidBlock = ~0ull;
std::uint32_t count_loader_requests(const std::vector<std::uint64_t>& blocks,
                                    std::uint64_t carry);

}  // namespace hetgraph
