#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetgraph/cost_model.hpp"
#include "hetgraph/sim.hpp"

namespace hetgraph {

/// Nominal clock used to convert edges/cycle into MTEPS in reports.
constexpr double kReportClockHz = 225e6;

/// Abstract resource units per pipeline kind; loaded from a JSON table
/// {"little_units": .., "big_units": .., "capacity_units": ..,
///  "per_unit_throughput": ..}.
struct ResourceTable {
  double little_units = 1.0;
  double big_units = 1.0;
  double capacity_units = 14.0;
  double per_unit_throughput = 8.0;  // edges/cycle one resource unit can sustain
};

ResourceTable load_resource_table(const std::string& path);

struct RooflinePoint {
  std::string label;
  double throughput_epc = 0.0;   // edges per cycle
  double mteps = 0.0;            // at kReportClockHz
  double resource_units = 0.0;
  double efficiency = 0.0;       // throughput / resource_units
};

RooflinePoint make_roofline_point(const std::string& label, std::uint64_t edges,
                                  std::int64_t makespan_cycles, double resource_units);

/// Bound lines of the resource-centric plot: a horizontal bandwidth bound
/// (channels x one block per cycle, in edges/cycle) and a diagonal resource
/// bound (throughput = efficiency x capacity_units).
struct RooflineBounds {
  double bandwidth_bound_epc = 0.0;
  double resource_capacity_units = 0.0;
};

RooflineBounds roofline_bounds(std::uint32_t channels, const PipelineConfig& cfg,
                               const ResourceTable& table);

std::string roofline_csv(const std::vector<RooflinePoint>& points, const RooflineBounds& bounds);

/// Per-partition estimate dump:
/// part_index, kind, E_p, total, access_v, access_e, proc, store, const.
std::string estimates_csv(const std::vector<Partition>& parts, const PipelineConfig& cfg,
                          const MemoryLatencyModel& mem);

/// Per-task trace dump: pipeline_id, kind, task_id, cycles, mem_requests,
/// stalls_by_cause (semicolon-joined key=value pairs).
std::string traces_csv(const std::vector<PipelineTrace>& traces);

}  // namespace hetgraph
