#pragma once

#include <cstdint>

#include "hetgraph/config.hpp"
#include "hetgraph/sim.hpp"

namespace hetgraph {

struct CalibrationResult {
  MemoryLatencyModel memory;     // fitted a, b; clamps bracket the measurements
  std::int64_t c_const = 0;      // per-task switch overhead
  std::int64_t intercept_little = 0;
  std::int64_t intercept_big = 0;
  bool degenerate_fit = false;   // all strides measured equal; a forced to 0
};

/// Treats `ground_truth` as the machine under test: fits (a, b) by least
/// squares over strided reads at block strides {1, 2, 4, ..., 2^16}
/// (clamp-saturated samples excluded), then regresses simulated cycles of
/// dummy partitions (<= 16 edges) against edge count on both pipeline
/// kinds, with the known store and edge-loop terms subtracted so the
/// intercept isolates the switch overhead.
CalibrationResult calibrate(const MemoryLatencyModel& ground_truth, const PipelineConfig& cfg,
                            const SimParams& sim);

}  // namespace hetgraph
