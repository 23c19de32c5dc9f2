#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetgraph/graph.hpp"
#include "hetgraph/scheduler.hpp"
#include "hetgraph/sim.hpp"
#include "hetgraph/udf.hpp"

namespace hetgraph {

enum class App { PageRank, Bfs, Closeness };

App app_from_name(const std::string& name);
const char* to_string(App app);

struct AppOptions {
  App app = App::PageRank;
  std::uint32_t pr_iterations = 16;
  VertexId bfs_root = 0;                // relabelled id
  std::vector<VertexId> cc_roots;       // relabelled ids; empty -> default set
};

/// Default closeness root sample: the first eight relabelled vertex ids,
/// which are the hottest after degree grouping.
std::vector<VertexId> default_cc_roots(std::uint32_t num_vertices);

GasUdf udf_for(App app);

// ---- CPU reference ----

/// One GAS pass: scatter/gather over the edge list, then apply per vertex.
std::vector<PropValue> oracle_iteration(const Graph& g, const GasUdf& udf,
                                        const std::vector<PropValue>& props);

/// Iterates until the property array stops changing, capped at
/// max_iterations passes.
std::vector<PropValue> oracle_run(const Graph& g, const GasUdf& udf,
                                  std::vector<PropValue> props, std::uint32_t max_iterations);

std::vector<PropValue> oracle_app(const Graph& g, const AppOptions& opts);

/// Queue-based BFS, independent of the GAS machinery; test oracle.
std::vector<PropValue> reference_bfs_levels(const Graph& g, VertexId root);

// ---- Simulated runs ----

struct SimAppResult {
  std::vector<PropValue> props;
  std::uint64_t iterations = 0;       // GAS passes executed (all roots for closeness)
  std::int64_t total_makespan = 0;    // summed over passes
  std::vector<PipelineTrace> last_traces;
  std::vector<ChannelCounters> edge_channels, prop_channels;  // last pass
};

/// Runs one kernel to completion under a fixed plan.
SimAppResult sim_app(const std::vector<Partition>& parts, const Graph& g,
                     const SchedulePlan& plan, const Config& config, const AppOptions& opts,
                     const SimParams& sim);

/// Lower-level driver shared by the kernels: fixed-point iteration of
/// run_iteration with the same stop rule as oracle_run.
SimAppResult sim_run(const std::vector<Partition>& parts, const Graph& g,
                     const SchedulePlan& plan, const Config& config, const GasUdf& udf,
                     std::vector<PropValue> props, std::uint32_t max_iterations,
                     const SimParams& sim);

}  // namespace hetgraph
