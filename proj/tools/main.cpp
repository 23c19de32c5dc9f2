// Command-line front end: preprocess, schedule, simulate, validate,
// roofline, calibrate. Exit codes: 0 ok, 1 validation failure, 2 usage.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hetgraph/calibrate.hpp"
#include "hetgraph/graph_io.hpp"
#include "hetgraph/kernels.hpp"
#include "hetgraph/report.hpp"
#include "hetgraph/rmat.hpp"

namespace hg = hetgraph;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;  // section.key=value
};

hg::Config resolve_config(const CommonOpts& common) {
  hg::Config cfg;
  if (!common.config_path.empty()) cfg = hg::load_config(common.config_path);
  if (!common.overrides.empty()) {
    json j = json::parse(hg::config_to_json(cfg));
    for (const std::string& ov : common.overrides) {
      auto eq = ov.find('=');
      auto dot = ov.find('.');
      if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
        throw hg::Error("expected --set section.key=value, got '" + ov + "'");
      }
      std::string section = ov.substr(0, dot);
      std::string key = ov.substr(dot + 1, eq - dot - 1);
      std::string value = ov.substr(eq + 1);
      json parsed;
      if (value == "true" || value == "false") {
        parsed = (value == "true");
      } else if (value.find_first_not_of("0123456789") == std::string::npos && !value.empty()) {
        parsed = std::stoull(value);
      } else {
        try {
          parsed = std::stod(value);
        } catch (const std::exception&) {
          parsed = value;
        }
      }
      j[section][key] = parsed;
    }
    cfg = hg::parse_config_text(j.dump(), true);
  }
  return cfg;
}

void apply_platform_preset(hg::Config& cfg, const std::string& name) {
  if (name.empty()) return;
  if (name == "u280") {
    cfg.platform = {32, 32, 4, 256ull * 1024 * 1024, "u280"};
  } else if (name == "u50") {
    cfg.platform = {32, 28, 4, 256ull * 1024 * 1024, "u50"};
  } else {
    throw hg::Error("unknown platform preset '" + name + "' (expected u280 or u50)");
  }
}

hg::Graph load_input_graph(const std::string& input, const std::string& format, bool undirected) {
  if (input.rfind("rmat:", 0) == 0) {
    hg::RmatParams params;
    std::stringstream ss(input.substr(5));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw hg::Error("bad rmat spec '" + kv + "'");
      std::string k = kv.substr(0, eq);
      std::uint64_t v = std::stoull(kv.substr(eq + 1));
      if (k == "scale") params.scale = static_cast<std::uint32_t>(v);
      else if (k == "ef") params.edge_factor = static_cast<std::uint32_t>(v);
      else if (k == "seed") params.seed = v;
      else throw hg::Error("unknown rmat key '" + k + "'");
    }
    return hg::generate_rmat(params);
  }
  hg::GraphFormat fmt;
  if (format == "edgelist") {
    fmt = hg::GraphFormat::EdgeList;
  } else if (format == "mtx") {
    fmt = hg::GraphFormat::MatrixMarket;
  } else {
    throw hg::Error("unknown format '" + format + "' (expected edgelist or mtx)");
  }
  return hg::load_graph(input, fmt, undirected);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw hg::Error("cannot open output file: " + path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hg::Error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Gather buffers must hold one partition interval; desk-scale runs derive
// the buffer size from the file's interval unless the config pinned a
// non-default one.
void fit_buffer_to_partitions(hg::Config& cfg, const hg::PreprocessedGraph& pg) {
  if (cfg.pipeline.s_buf == hg::PipelineConfig{}.s_buf) {
    cfg.pipeline.set_partition_capacity(pg.interval_size);
  } else if (cfg.pipeline.buffered_vertices() < pg.interval_size) {
    throw hg::Error("configured gather buffer holds " +
                    std::to_string(cfg.pipeline.buffered_vertices()) +
                    " vertices but the graph was partitioned with U = " +
                    std::to_string(pg.interval_size));
  }
}

hg::AppOptions make_app_options(const std::string& app, std::uint32_t iterations,
                                std::uint64_t root, const std::vector<std::uint64_t>& roots,
                                const hg::PreprocessedGraph& pg) {
  hg::AppOptions opts;
  opts.app = hg::app_from_name(app);
  opts.pr_iterations = iterations;
  auto map_root = [&](std::uint64_t original) {
    if (original >= pg.perm.old_to_new.size()) {
      throw hg::Error("root " + std::to_string(original) + " out of range");
    }
    return pg.perm.old_to_new[original];
  };
  if (pg.graph.num_vertices > 0) opts.bfs_root = map_root(root);
  for (std::uint64_t r : roots) opts.cc_roots.push_back(map_root(r));
  return opts;
}

json report_json(const std::string& app, std::uint64_t v, std::uint64_t e,
                 const hg::SchedulePlan& plan, const hg::SimAppResult& result) {
  json rep;
  rep["app"] = app;
  rep["vertices"] = v;
  rep["edges"] = e;
  rep["M"] = plan.num_little;
  rep["N"] = plan.num_big;
  rep["iterations"] = result.iterations;
  rep["total_makespan"] = result.total_makespan;
  double epc = result.total_makespan > 0
                   ? static_cast<double>(e) * result.iterations / result.total_makespan
                   : 0.0;
  rep["throughput_edges_per_cycle"] = epc;
  rep["mteps"] = epc * hg::kReportClockHz / 1e6;
  json channels = json::array();
  for (std::size_t i = 0; i < result.edge_channels.size(); ++i) {
    channels.push_back({{"pipeline", i},
                        {"edge_reads", result.edge_channels[i].reads_issued},
                        {"edge_blocks", result.edge_channels[i].blocks_transferred},
                        {"edge_busy", result.edge_channels[i].busy_cycles},
                        {"prop_reads", result.prop_channels[i].reads_issued},
                        {"prop_blocks", result.prop_channels[i].blocks_transferred},
                        {"prop_busy", result.prop_channels[i].busy_cycles}});
  }
  rep["channels"] = std::move(channels);
  return rep;
}

int cmd_validate(const std::string& app, std::uint32_t graphs, std::uint64_t seed,
                 std::uint32_t scale, std::uint32_t pipelines, hg::Config cfg,
                 const hg::SimParams& sim) {
  std::uint32_t failures = 0;
  for (std::uint32_t i = 0; i < graphs; ++i) {
    hg::RmatParams params{scale, 16, seed + i};
    hg::Graph g = hg::generate_rmat(params);
    std::uint32_t interval = std::max<std::uint32_t>(64, (1u << scale) / 8);
    hg::PreprocessedGraph pg = hg::preprocess(std::move(g), interval, true);
    hg::build_windows(pg.partitions, 4096);
    hg::Config run_cfg = cfg;
    run_cfg.pipeline.set_partition_capacity(pg.interval_size);

    hg::SchedulePlan plan = hg::plan_schedule(pg.partitions, run_cfg.pipeline, run_cfg.memory,
                                              pipelines, run_cfg.platform.name);
    hg::AppOptions opts;
    opts.app = hg::app_from_name(app);
    hg::SimAppResult simulated = hg::sim_app(pg.partitions, pg.graph, plan, run_cfg, opts, sim);
    std::vector<hg::PropValue> expected = hg::oracle_app(pg.graph, opts);
    bool ok = simulated.props == expected;
    std::cout << "graph " << i << " (scale " << scale << ", seed " << (seed + i) << "): "
              << (ok ? "match" : "MISMATCH") << "\n";
    if (!ok) failures++;
  }
  if (failures > 0) {
    std::cerr << failures << " of " << graphs << " graphs mismatched the reference\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli("heterogeneous graph pipeline simulator and scheduler");
  cli.require_subcommand(1);

  CommonOpts common;
  cli.add_option("--config", common.config_path, "TOML or JSON config file")
      ->envname("HETGRAPH_CONFIG");
  cli.add_option("--set", common.overrides, "override a config field: section.key=value");

  // --- preprocess ---
  auto* pre = cli.add_subcommand("preprocess", "load, reorder and partition a graph");
  std::string in_path, in_format = "edgelist", out_path = "graph.rgrf";
  bool undirected = false, dbg = false;
  std::uint64_t interval = 0;
  pre->add_option("--input", in_path, "edge list / mtx path, or rmat:scale=S,ef=F,seed=N")
      ->required();
  pre->add_option("--format", in_format, "edgelist|mtx");
  pre->add_flag("--undirected", undirected, "treat input edges as undirected");
  pre->add_flag("--dbg", dbg, "apply degree-based grouping before partitioning");
  pre->add_option("--U", interval, "destination vertices per partition")->required();
  pre->add_option("--out", out_path, "output path for the preprocessed binary");

  // --- schedule ---
  auto* sched = cli.add_subcommand("schedule", "generate a scheduling plan");
  std::string pre_path, plan_out, platform_preset, sched_app = "pr", estimates_out;
  std::uint64_t pipelines = 0, window_size = 4096;
  sched->add_option("--pre", pre_path, "preprocessed graph")->required();
  sched->add_option("--pipelines", pipelines, "total pipeline count (default: platform limit)");
  sched->add_option("--platform", platform_preset, "platform preset: u280|u50");
  sched->add_option("--app", sched_app, "application: pr|bfs|cc");
  sched->add_option("--window-size", window_size, "edges per window");
  sched->add_option("--out", plan_out, "plan JSON output (default stdout)");
  sched->add_option("--estimates-csv", estimates_out, "dump per-partition estimates CSV");

  // --- simulate ---
  auto* simc = cli.add_subcommand("simulate", "run a kernel under a plan");
  std::string sim_pre, sim_plan, sim_app_name = "pr", sim_out, trace_out, props_out;
  std::string sim_platform;
  std::uint64_t iterations = 16, bfs_root = 0, sim_pipelines = 0, sim_window = 4096;
  std::vector<std::uint64_t> cc_roots;
  bool sweep = false, threaded = false;
  simc->add_option("--pre", sim_pre, "preprocessed graph")->required();
  simc->add_option("--plan", sim_plan, "plan JSON (omit with --sweep-mixes)");
  simc->add_option("--app", sim_app_name, "application: pr|bfs|cc");
  simc->add_option("--iterations", iterations, "PageRank iteration count");
  simc->add_option("--root", bfs_root, "BFS root (original vertex id)");
  simc->add_option("--roots", cc_roots, "closeness roots (original vertex ids)");
  simc->add_option("--out", sim_out, "report JSON output (default stdout)");
  simc->add_option("--trace-csv", trace_out, "per-task trace CSV");
  simc->add_option("--props-out", props_out, "final property dump, one value per line");
  simc->add_flag("--sweep-mixes", sweep, "simulate every (M,N) split; CSV output");
  simc->add_option("--pipelines", sim_pipelines, "pipeline count for --sweep-mixes");
  simc->add_option("--window-size", sim_window, "edges per window");
  simc->add_option("--platform", sim_platform, "platform preset: u280|u50");
  simc->add_flag("--threads", threaded, "simulate pipelines on worker threads");

  // --- validate ---
  auto* val = cli.add_subcommand("validate", "check simulator output against the CPU reference");
  std::string val_app = "pr";
  std::uint64_t val_graphs = 10, val_seed = 7, val_scale = 12, val_pipelines = 4;
  val->add_option("--app", val_app, "application: pr|bfs|cc");
  val->add_option("--graphs", val_graphs, "number of generated graphs");
  val->add_option("--seed", val_seed, "base RNG seed");
  val->add_option("--scale", val_scale, "rmat scale");
  val->add_option("--pipelines", val_pipelines, "pipelines in the plan");

  // --- roofline ---
  auto* roof = cli.add_subcommand("roofline", "resource-centric roofline CSV from reports");
  std::vector<std::string> report_paths;
  std::string resources_path, roof_out;
  roof->add_option("--reports", report_paths, "simulate report JSON files")->required();
  roof->add_option("--resources", resources_path, "resource unit table JSON")->required();
  roof->add_option("--out", roof_out, "CSV output (default stdout)");

  // --- calibrate ---
  auto* cal = cli.add_subcommand("calibrate", "fit memory latency coefficients and C_const");
  std::string cal_out;
  std::uint64_t cal_switch = 2000;
  cal->add_option("--out", cal_out, "calibration JSON output (default stdout)");
  cal->add_option("--switch-overhead", cal_switch, "simulator switch overhead to recover");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = cli.exit(e);
    return rc == 0 ? 0 : 2;  // --help is fine, anything else is usage
  }

  try {
    hg::Config cfg = resolve_config(common);

    if (*pre) {
      hg::Graph g = load_input_graph(in_path, in_format, undirected);
      if (interval == 0 || interval > 0xFFFFFFFFull) throw hg::Error("--U out of range");
      hg::PreprocessedGraph pg =
          hg::preprocess(std::move(g), static_cast<std::uint32_t>(interval), dbg);
      hg::save_binary(pg, out_path);
      std::cout << "wrote " << out_path << ": V=" << pg.graph.num_vertices
                << " E=" << pg.graph.num_edges() << " partitions=" << pg.partitions.size()
                << (dbg ? " (degree-grouped)" : "") << "\n";
      return 0;
    }

    if (*sched) {
      apply_platform_preset(cfg, platform_preset);
      hg::app_from_name(sched_app);  // validated; estimates are app-independent
      hg::PreprocessedGraph pg = hg::load_binary(pre_path);
      fit_buffer_to_partitions(cfg, pg);
      hg::build_windows(pg.partitions, window_size);
      std::uint32_t n_pip = pipelines > 0 ? static_cast<std::uint32_t>(pipelines)
                                          : hg::max_pipelines(cfg.platform);
      hg::SchedulePlan plan = hg::plan_schedule(pg.partitions, cfg.pipeline, cfg.memory, n_pip,
                                                cfg.platform.name);
      if (!estimates_out.empty()) {
        write_output(estimates_out, hg::estimates_csv(pg.partitions, cfg.pipeline, cfg.memory));
      }
      write_output(plan_out, hg::plan_to_json(plan) + "\n");
      return 0;
    }

    if (*simc) {
      apply_platform_preset(cfg, sim_platform);
      hg::PreprocessedGraph pg = hg::load_binary(sim_pre);
      fit_buffer_to_partitions(cfg, pg);
      hg::build_windows(pg.partitions, sim_window);
      hg::AppOptions opts = make_app_options(sim_app_name, static_cast<std::uint32_t>(iterations),
                                             bfs_root, cc_roots, pg);
      hg::SimParams sim;
      sim.threaded = threaded;

      if (sweep) {
        std::uint32_t n_pip = sim_pipelines > 0 ? static_cast<std::uint32_t>(sim_pipelines)
                                                : hg::max_pipelines(cfg.platform);
        std::ostringstream csv;
        csv << "little,big,iterations,total_makespan,throughput_edges_per_cycle,mteps\n";
        for (std::uint32_t m = 0; m <= n_pip; ++m) {
          hg::SchedulePlan plan = hg::plan_with_mix(pg.partitions, cfg.pipeline, cfg.memory, m,
                                                    n_pip - m, cfg.platform.name);
          hg::SimAppResult r = hg::sim_app(pg.partitions, pg.graph, plan, cfg, opts, sim);
          double epc = r.total_makespan > 0 ? static_cast<double>(pg.graph.num_edges()) *
                                                  r.iterations / r.total_makespan
                                            : 0.0;
          csv << m << ',' << (n_pip - m) << ',' << r.iterations << ',' << r.total_makespan << ','
              << epc << ',' << epc * hg::kReportClockHz / 1e6 << '\n';
        }
        write_output(sim_out, csv.str());
        return 0;
      }

      if (sim_plan.empty()) throw hg::Error("--plan is required unless --sweep-mixes is given");
      hg::SchedulePlan plan = hg::plan_from_json(read_file(sim_plan));
      hg::SimAppResult r = hg::sim_app(pg.partitions, pg.graph, plan, cfg, opts, sim);
      if (!trace_out.empty()) write_output(trace_out, hg::traces_csv(r.last_traces));
      if (!props_out.empty()) {
        std::ostringstream props;
        for (hg::PropValue p : r.props) props << p << '\n';
        write_output(props_out, props.str());
      }
      write_output(sim_out,
                   report_json(sim_app_name, pg.graph.num_vertices, pg.graph.num_edges(), plan, r)
                           .dump(2) +
                       "\n");
      return 0;
    }

    if (*val) {
      hg::SimParams sim;
      return cmd_validate(val_app, static_cast<std::uint32_t>(val_graphs), val_seed,
                          static_cast<std::uint32_t>(val_scale),
                          static_cast<std::uint32_t>(val_pipelines), cfg, sim);
    }

    if (*roof) {
      hg::ResourceTable table = hg::load_resource_table(resources_path);
      std::vector<hg::RooflinePoint> points;
      std::uint32_t max_channels = 1;
      for (const std::string& path : report_paths) {
        json rep = json::parse(read_file(path));
        std::uint32_t m = rep.at("M").get<std::uint32_t>();
        std::uint32_t n = rep.at("N").get<std::uint32_t>();
        double units = m * table.little_units + n * table.big_units;
        std::uint64_t edges =
            rep.at("edges").get<std::uint64_t>() * rep.at("iterations").get<std::uint64_t>();
        points.push_back(hg::make_roofline_point(rep.value("app", "?") + "-" + std::to_string(m) +
                                                 "L" + std::to_string(n) + "B",
                                             edges, rep.at("total_makespan").get<std::int64_t>(),
                                             units));
        max_channels = std::max(max_channels, m + n);
      }
      hg::RooflineBounds bounds = hg::roofline_bounds(max_channels, cfg.pipeline, table);
      write_output(roof_out, hg::roofline_csv(points, bounds));
      return 0;
    }

    if (*cal) {
      hg::SimParams sim;
      sim.switch_overhead = static_cast<std::int64_t>(cal_switch);
      hg::CalibrationResult res = hg::calibrate(cfg.memory, cfg.pipeline, sim);
      json j;
      j["a"] = res.memory.a();
      j["b"] = res.memory.b();
      j["l_min"] = res.memory.l_min;
      j["l_max"] = res.memory.l_max;
      j["c_const"] = res.c_const;
      j["intercept_little"] = res.intercept_little;
      j["intercept_big"] = res.intercept_big;
      j["degenerate_fit"] = res.degenerate_fit;
      write_output(cal_out, j.dump(2) + "\n");
      return 0;
    }
  } catch (const hg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
