#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetgraph/cost_model.hpp"
#include "hetgraph/partition.hpp"

namespace hetgraph {

/// Contiguous window range of one parent (a partition for Little pipelines,
/// a merged sparse group for Big pipelines). est_cycles is the window-sum
/// enumeration term; store and switch overheads are charged per task on top.
struct SubPartition {
  std::uint32_t parent = 0;
  std::uint32_t window_lo = 0;
  std::uint32_t window_hi = 0;
  std::int64_t est_cycles = 0;
};

struct SchedulePlan {
  std::string platform;
  std::uint32_t num_little = 0;  // M
  std::uint32_t num_big = 0;     // N
  std::vector<std::uint32_t> dense_ids;
  std::vector<std::uint32_t> sparse_ids;
  std::vector<std::vector<std::uint32_t>> merged_groups;
  std::vector<std::vector<SubPartition>> little_assignments;  // one list per Little pipeline
  std::vector<std::vector<SubPartition>> big_assignments;     // one list per Big pipeline
  std::int64_t est_makespan = 0;

  std::uint32_t num_pipelines() const { return num_little + num_big; }
};

struct ClassifyResult {
  std::vector<std::uint32_t> dense_ids;
  std::vector<std::uint32_t> sparse_ids;
  // Full per-partition estimates (unamortized totals), indexed by partition.
  std::vector<std::int64_t> t_little;
  std::vector<std::int64_t> t_big;
  /// Sum over partitions of min(T_Little, T_Big amortized), whole cycles.
  std::int64_t total_min = 0;
};

/// Marks a partition sparse iff its Big estimate is below its Little
/// estimate, with Big store/switch overheads amortized over the n_gpe
/// partitions a Big pipeline processes per execution. Ties go dense.
/// Zero-edge partitions are excluded from both lists.
ClassifyResult classify_partitions(const std::vector<Partition>& parts,
                                   const PipelineConfig& cfg, const MemoryLatencyModel& mem);

/// Exhaustive scan of M in [0, n_pip]: minimizes
/// |dense_time/M - sparse_time/N|, excluding M=0 while dense work exists and
/// N=0 while sparse work exists. Ties break toward larger N.
std::pair<std::uint32_t, std::uint32_t> choose_pipeline_mix(std::int64_t dense_time,
                                                            std::int64_t sparse_time,
                                                            std::uint32_t n_pip);

/// Full planning pass: estimates windows, classifies, picks the mix, merges
/// sparse partitions into ceil(Y/n_gpe) groups and cuts both clusters at
/// cumulative-estimate quantiles. Deterministic.
SchedulePlan plan_schedule(std::vector<Partition>& parts, const PipelineConfig& cfg,
                           const MemoryLatencyModel& mem, std::uint32_t n_pip,
                           const std::string& platform_name = "");

/// Plan under a forced (M, N) split, for mix sweeps. A homogeneous forced
/// mix reassigns every non-empty partition to the surviving cluster.
SchedulePlan plan_with_mix(std::vector<Partition>& parts, const PipelineConfig& cfg,
                           const MemoryLatencyModel& mem, std::uint32_t num_little,
                           std::uint32_t num_big, const std::string& platform_name = "");

/// Quantile cut used for both clusters; exposed for tests. Items are
/// (parent, window index, weight) triples in scan order; boundaries never
/// split a window and a sub-partition never spans two parents.
struct CutItem {
  std::uint32_t parent;
  std::uint32_t window;
  std::int64_t weight;
};
std::vector<std::vector<SubPartition>> cut_cluster(const std::vector<CutItem>& items,
                                                   std::uint32_t num_pipelines);

/// Raises if any window is assigned twice or missed.
void validate_plan(const SchedulePlan& plan, const std::vector<Partition>& parts);

std::string plan_to_json(const SchedulePlan& plan);
SchedulePlan plan_from_json(const std::string& text);

}  // namespace hetgraph
