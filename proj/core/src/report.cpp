#include "hetgraph/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hetgraph {

ResourceTable load_resource_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open resource table: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  ResourceTable t;
  t.little_units = j.at("little_units").get<double>();
  t.big_units = j.at("big_units").get<double>();
  t.capacity_units = j.at("capacity_units").get<double>();
  t.per_unit_throughput = j.value("per_unit_throughput", t.per_unit_throughput);
  HG_CHECK(t.little_units > 0 && t.big_units > 0 && t.capacity_units > 0,
           "resource units must be positive");
  return t;
}

RooflinePoint make_roofline_point(const std::string& label, std::uint64_t edges,
                                  std::int64_t makespan_cycles, double resource_units) {
  HG_CHECK(makespan_cycles > 0, "makespan must be positive");
  HG_CHECK(resource_units > 0, "resource units must be positive");
  RooflinePoint p;
  p.label = label;
  p.throughput_epc = static_cast<double>(edges) / static_cast<double>(makespan_cycles);
  p.mteps = p.throughput_epc * kReportClockHz / 1e6;
  p.resource_units = resource_units;
  p.efficiency = p.throughput_epc / resource_units;
  return p;
}

RooflineBounds roofline_bounds(std::uint32_t channels, const PipelineConfig& cfg,
                               const ResourceTable& table) {
  RooflineBounds b;
  // One block of edges per channel per cycle.
  b.bandwidth_bound_epc = static_cast<double>(channels) * cfg.s_mem / cfg.s_e;
  b.resource_capacity_units = table.capacity_units;
  return b;
}

std::string roofline_csv(const std::vector<RooflinePoint>& points, const RooflineBounds& bounds) {
  std::ostringstream out;
  out << "label,throughput_edges_per_cycle,mteps,resource_units,efficiency\n";
  for (const RooflinePoint& p : points) {
    out << p.label << ',' << p.throughput_epc << ',' << p.mteps << ',' << p.resource_units << ','
        << p.efficiency << '\n';
  }
  out << "#bound,bandwidth_epc," << bounds.bandwidth_bound_epc << '\n';
  out << "#bound,resource_capacity_units," << bounds.resource_capacity_units << '\n';
  return out.str();
}

std::string estimates_csv(const std::vector<Partition>& parts, const PipelineConfig& cfg,
                          const MemoryLatencyModel& mem) {
  std::ostringstream out;
  out << "part_index,kind,edges,total,access_v,access_e,proc,store,const\n";
  for (const Partition& p : parts) {
    for (PipelineKind kind : {PipelineKind::Little, PipelineKind::Big}) {
      CycleEstimate est = estimate_partition(p, kind, cfg, mem);
      out << p.index << ',' << to_string(kind) << ',' << p.num_edges() << ',' << est.total << ','
          << est.access_v << ',' << est.access_e << ',' << est.proc << ',' << est.store << ','
          << est.const_overhead << '\n';
    }
  }
  return out.str();
}

std::string traces_csv(const std::vector<PipelineTrace>& traces) {
  std::ostringstream out;
  out << "pipeline_id,kind,task_id,cycles,mem_requests,edges,stalls_by_cause\n";
  for (const PipelineTrace& t : traces) {
    out << t.pipeline_id << ',' << to_string(t.kind) << ',' << t.task_id << ','
        << t.cycles_total << ',' << t.mem_requests << ',' << t.edges_processed << ',';
    bool first = true;
    for (const auto& [cause, cycles] : t.stall_cycles_by_cause) {
      if (!first) out << ';';
      out << cause << '=' << cycles;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace hetgraph
