#pragma once

#include <cstdint>

#include "hetgraph/config.hpp"
#include "hetgraph/partition.hpp"

namespace hetgraph {

enum class PipelineKind { Big, Little };

const char* to_string(PipelineKind kind);

/// Per-partition cycle estimate. The enumeration term is the sum over issue
/// sets of max(vertex access, edge access, processing); component fields are
/// the individual sums, kept for diagnostics. All fields are whole cycles;
/// fractional quantities are accumulated exactly in 1/kQ units and rounded
/// up once.
struct CycleEstimate {
  PipelineKind kind = PipelineKind::Little;
  std::int64_t total = 0;
  std::int64_t sum_max = 0;
  std::int64_t access_v = 0;
  std::int64_t access_e = 0;
  std::int64_t proc = 0;
  std::int64_t store = 0;
  std::int64_t const_overhead = 0;
};

/// Buffer write-out cost: Big flushes n_gpe distinct buffers, Little flushes
/// one merged buffer.
std::int64_t store_cycles(PipelineKind kind, const PipelineConfig& cfg);

/// Edge-access cycles for one full issue set of n_spe edges, in 1/kQ units.
std::int64_t edge_set_cost_q(const PipelineConfig& cfg);
/// Processing cycles for one full issue set, in 1/kQ units.
std::int64_t proc_set_cost_q(const PipelineConfig& cfg);

CycleEstimate estimate_partition(const Partition& part, PipelineKind kind,
                                 const PipelineConfig& cfg, const MemoryLatencyModel& mem);

/// Fills est_cycles_big / est_cycles_little on every window. Issue sets are
/// anchored at the partition's edge 0 and attributed to the window holding
/// their first edge; window values are prefix-differenced so that any tiling
/// sums exactly to the partition's enumeration term.
void estimate_windows(Partition& part, const PipelineConfig& cfg, const MemoryLatencyModel& mem);
void estimate_windows(std::vector<Partition>& parts, const PipelineConfig& cfg,
                      const MemoryLatencyModel& mem);

}  // namespace hetgraph
