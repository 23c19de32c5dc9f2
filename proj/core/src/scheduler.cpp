#include "hetgraph/scheduler.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

namespace hetgraph {

ClassifyResult classify_partitions(const std::vector<Partition>& parts,
                                   const PipelineConfig& cfg, const MemoryLatencyModel& mem) {
  ClassifyResult r;
  r.t_little.resize(parts.size(), 0);
  r.t_big.resize(parts.size(), 0);
  const std::int64_t n_gpe = cfg.n_gpe;
  for (const Partition& p : parts) {
    CycleEstimate little = estimate_partition(p, PipelineKind::Little, cfg, mem);
    CycleEstimate big = estimate_partition(p, PipelineKind::Big, cfg, mem);
    r.t_little[p.index] = little.total;
    r.t_big[p.index] = big.total;
    if (!p.has_edges()) continue;

    // Big overheads amortize over the n_gpe partitions one execution covers.
    // Compare n_gpe * T_big_amortized < n_gpe * T_little exactly.
    std::int64_t big_amort_scaled = n_gpe * big.sum_max + big.store + big.const_overhead;
    std::int64_t little_scaled = n_gpe * little.total;
    if (big_amort_scaled < little_scaled) {
      r.sparse_ids.push_back(p.index);
      r.total_min += (big_amort_scaled + n_gpe - 1) / n_gpe;
    } else {
      r.dense_ids.push_back(p.index);
      r.total_min += little.total;
    }
  }
  return r;
}

std::pair<std::uint32_t, std::uint32_t> choose_pipeline_mix(std::int64_t dense_time,
                                                            std::int64_t sparse_time,
                                                            std::uint32_t n_pip) {
  HG_CHECK(dense_time >= 0 && sparse_time >= 0, "cluster times must be nonnegative");
  std::uint32_t needed = (dense_time > 0 ? 1u : 0u) + (sparse_time > 0 ? 1u : 0u);
  if (n_pip < std::max(needed, 1u)) {
    throw Error("need at least " + std::to_string(needed) + " pipelines, have " +
                std::to_string(n_pip));
  }

  // Objective |dense/M - sparse/N| compared exactly as a fraction p/q.
  bool have = false;
  std::uint32_t best_m = 0;
  __int128 best_p = 0, best_q = 1;
  for (std::uint32_t m = 0; m <= n_pip; ++m) {
    std::uint32_t n = n_pip - m;
    if (m == 0 && dense_time > 0) continue;
    if (n == 0 && sparse_time > 0) continue;
    __int128 p, q;
    if (m == 0) {
      p = n > 0 ? static_cast<__int128>(sparse_time) : 0;
      q = n > 0 ? n : 1;
    } else if (n == 0) {
      p = dense_time;
      q = m;
    } else {
      __int128 diff = static_cast<__int128>(dense_time) * n - static_cast<__int128>(sparse_time) * m;
      p = diff < 0 ? -diff : diff;
      q = static_cast<__int128>(m) * n;
    }
    // Strict improvement only: the first minimum in ascending-M order wins,
    // which is the largest-N tiebreak.
    if (!have || p * best_q < best_p * q) {
      have = true;
      best_m = m;
      best_p = p;
      best_q = q;
    }
  }
  HG_CHECK(have, "pipeline mix scan found no feasible split");
  return {best_m, n_pip - best_m};
}

std::vector<std::vector<SubPartition>> cut_cluster(const std::vector<CutItem>& items,
                                                   std::uint32_t num_pipelines) {
  std::vector<std::vector<SubPartition>> out(num_pipelines);
  if (items.empty() || num_pipelines == 0) return out;

  std::int64_t total = 0;
  for (const CutItem& it : items) {
    HG_CHECK(it.weight >= 0, "window weights must be nonnegative");
    total += it.weight;
  }

  std::int64_t cum = 0;
  for (const CutItem& it : items) {
    std::uint32_t pipe =
        total == 0 ? 0
                   : static_cast<std::uint32_t>(std::min<std::int64_t>(
                         num_pipelines - 1,
                         static_cast<std::int64_t>((static_cast<__int128>(cum) * num_pipelines) / total)));
    auto& tasks = out[pipe];
    if (!tasks.empty() && tasks.back().parent == it.parent &&
        tasks.back().window_hi == it.window) {
      tasks.back().window_hi = it.window + 1;
      tasks.back().est_cycles += it.weight;
    } else {
      tasks.push_back({it.parent, it.window, it.window + 1, it.weight});
    }
    cum += it.weight;
  }
  return out;
}

namespace {

SchedulePlan build_plan(std::vector<Partition>& parts, const PipelineConfig& cfg,
                        std::uint32_t m, std::uint32_t n,
                        std::vector<std::uint32_t> dense_ids,
                        std::vector<std::uint32_t> sparse_ids, const std::string& platform_name) {
  HG_CHECK(m > 0 || dense_ids.empty(), "dense work scheduled with zero Little pipelines");
  HG_CHECK(n > 0 || sparse_ids.empty(), "sparse work scheduled with zero Big pipelines");
  for (const Partition& p : parts) {
    HG_CHECK(!p.has_edges() || !p.windows.empty(), "partitions must have windows built");
  }

  SchedulePlan plan;
  plan.platform = platform_name;
  plan.num_little = m;
  plan.num_big = n;
  plan.dense_ids = std::move(dense_ids);
  plan.sparse_ids = std::move(sparse_ids);

  // Merge every n_gpe sparse partitions, in index order.
  for (std::size_t i = 0; i < plan.sparse_ids.size(); i += cfg.n_gpe) {
    std::size_t hi = std::min(plan.sparse_ids.size(), i + cfg.n_gpe);
    plan.merged_groups.emplace_back(plan.sparse_ids.begin() + i, plan.sparse_ids.begin() + hi);
  }

  std::vector<CutItem> dense_items;
  for (std::uint32_t id : plan.dense_ids) {
    const Partition& p = parts[id];
    for (std::uint32_t w = 0; w < p.windows.size(); ++w) {
      dense_items.push_back({id, w, p.windows[w].est_cycles_little});
    }
  }
  plan.little_assignments = cut_cluster(dense_items, m);

  std::vector<CutItem> sparse_items;
  for (std::uint32_t g = 0; g < plan.merged_groups.size(); ++g) {
    std::uint32_t w_base = 0;
    for (std::uint32_t id : plan.merged_groups[g]) {
      const Partition& p = parts[id];
      for (std::uint32_t w = 0; w < p.windows.size(); ++w) {
        sparse_items.push_back({g, w_base + w, p.windows[w].est_cycles_big});
      }
      w_base += static_cast<std::uint32_t>(p.windows.size());
    }
  }
  plan.big_assignments = cut_cluster(sparse_items, n);

  const std::int64_t store_l = store_cycles(PipelineKind::Little, cfg);
  const std::int64_t store_b = store_cycles(PipelineKind::Big, cfg);
  std::int64_t makespan = 0;
  for (const auto& tasks : plan.little_assignments) {
    std::int64_t t = 0;
    for (const SubPartition& sp : tasks) t += sp.est_cycles + store_l + cfg.c_const;
    makespan = std::max(makespan, t);
  }
  for (const auto& tasks : plan.big_assignments) {
    std::int64_t t = 0;
    for (const SubPartition& sp : tasks) t += sp.est_cycles + store_b + cfg.c_const;
    makespan = std::max(makespan, t);
  }
  plan.est_makespan = makespan;
  return plan;
}

}  // namespace

SchedulePlan plan_schedule(std::vector<Partition>& parts, const PipelineConfig& cfg,
                           const MemoryLatencyModel& mem, std::uint32_t n_pip,
                           const std::string& platform_name) {
  HG_CHECK(n_pip >= 1, "need at least one pipeline");
  estimate_windows(parts, cfg, mem);
  ClassifyResult cls = classify_partitions(parts, cfg, mem);

  const std::int64_t store_b = store_cycles(PipelineKind::Big, cfg);
  std::int64_t dense_time = 0;
  for (std::uint32_t id : cls.dense_ids) dense_time += cls.t_little[id];
  std::int64_t sparse_time = 0;
  for (std::size_t i = 0; i < cls.sparse_ids.size(); i += cfg.n_gpe) {
    std::size_t hi = std::min(cls.sparse_ids.size(), i + cfg.n_gpe);
    sparse_time += store_b + cfg.c_const;  // group overheads paid once
    for (std::size_t k = i; k < hi; ++k) {
      sparse_time += cls.t_big[cls.sparse_ids[k]] - store_b - cfg.c_const;
    }
  }

  if (n_pip == 1 && dense_time > 0 && sparse_time > 0) {
    // A single pipeline cannot host both clusters; fall back to whichever
    // homogeneous schedule the model says is cheaper overall.
    std::vector<std::uint32_t> all = cls.dense_ids;
    all.insert(all.end(), cls.sparse_ids.begin(), cls.sparse_ids.end());
    std::sort(all.begin(), all.end());
    std::int64_t all_little = 0;
    for (std::uint32_t id : all) all_little += cls.t_little[id];
    std::int64_t all_big = 0;
    for (std::size_t i = 0; i < all.size(); i += cfg.n_gpe) {
      std::size_t hi = std::min(all.size(), i + cfg.n_gpe);
      all_big += store_b + cfg.c_const;
      for (std::size_t k = i; k < hi; ++k) all_big += cls.t_big[all[k]] - store_b - cfg.c_const;
    }
    if (all_little <= all_big) {
      return build_plan(parts, cfg, 1, 0, std::move(all), {}, platform_name);
    }
    return build_plan(parts, cfg, 0, 1, {}, std::move(all), platform_name);
  }

  auto [m, n] = choose_pipeline_mix(dense_time, sparse_time, n_pip);
  return build_plan(parts, cfg, m, n, std::move(cls.dense_ids), std::move(cls.sparse_ids),
                    platform_name);
}

SchedulePlan plan_with_mix(std::vector<Partition>& parts, const PipelineConfig& cfg,
                           const MemoryLatencyModel& mem, std::uint32_t num_little,
                           std::uint32_t num_big, const std::string& platform_name) {
  HG_CHECK(num_little + num_big >= 1, "need at least one pipeline");
  estimate_windows(parts, cfg, mem);
  ClassifyResult cls = classify_partitions(parts, cfg, mem);
  std::vector<std::uint32_t> dense = std::move(cls.dense_ids);
  std::vector<std::uint32_t> sparse = std::move(cls.sparse_ids);
  if (num_little == 0) {
    // Homogeneous Big: everything runs as sparse work, in index order.
    sparse.insert(sparse.end(), dense.begin(), dense.end());
    std::sort(sparse.begin(), sparse.end());
    dense.clear();
  } else if (num_big == 0) {
    dense.insert(dense.end(), sparse.begin(), sparse.end());
    std::sort(dense.begin(), dense.end());
    sparse.clear();
  }
  return build_plan(parts, cfg, num_little, num_big, std::move(dense), std::move(sparse),
                    platform_name);
}

void validate_plan(const SchedulePlan& plan, const std::vector<Partition>& parts) {
  HG_CHECK(plan.little_assignments.size() == plan.num_little &&
               plan.big_assignments.size() == plan.num_big,
           "assignment list count does not match pipeline counts");
  for (const Partition& p : parts) {
    if (!p.has_edges()) continue;
    HG_CHECK(!p.windows.empty() && p.windows.back().edge_hi == p.num_edges(),
             "plan validated against partitions whose windows do not tile the edges");
  }
  std::vector<std::uint32_t> labels(parts.size(), 0);
  for (std::uint32_t id : plan.dense_ids) labels.at(id)++;
  for (std::uint32_t id : plan.sparse_ids) labels.at(id)++;
  for (const Partition& p : parts) {
    HG_CHECK(labels[p.index] == (p.has_edges() ? 1u : 0u),
             "every non-empty partition must be classified exactly once");
  }

  // Every window of every scheduled parent covered exactly once.
  std::vector<std::vector<std::uint32_t>> little_cover(parts.size());
  for (const auto& p : parts) little_cover[p.index].assign(p.windows.size(), 0);
  for (const auto& tasks : plan.little_assignments) {
    for (const SubPartition& sp : tasks) {
      HG_CHECK(sp.parent < parts.size(), "little task parent out of range");
      for (std::uint32_t w = sp.window_lo; w < sp.window_hi; ++w) little_cover[sp.parent].at(w)++;
    }
  }
  std::vector<std::uint32_t> group_sizes(plan.merged_groups.size(), 0);
  for (std::uint32_t g = 0; g < plan.merged_groups.size(); ++g) {
    for (std::uint32_t id : plan.merged_groups[g]) {
      group_sizes[g] += static_cast<std::uint32_t>(parts[id].windows.size());
    }
  }
  std::vector<std::vector<std::uint32_t>> big_cover(plan.merged_groups.size());
  for (std::uint32_t g = 0; g < plan.merged_groups.size(); ++g) big_cover[g].assign(group_sizes[g], 0);
  for (const auto& tasks : plan.big_assignments) {
    for (const SubPartition& sp : tasks) {
      HG_CHECK(sp.parent < plan.merged_groups.size(), "big task parent out of range");
      for (std::uint32_t w = sp.window_lo; w < sp.window_hi; ++w) big_cover[sp.parent].at(w)++;
    }
  }
  for (std::uint32_t id : plan.dense_ids) {
    for (std::uint32_t c : little_cover[id]) HG_CHECK(c == 1, "dense window not covered exactly once");
  }
  for (std::uint32_t g = 0; g < plan.merged_groups.size(); ++g) {
    for (std::uint32_t c : big_cover[g]) HG_CHECK(c == 1, "sparse window not covered exactly once");
  }
}

namespace {
using nlohmann::json;
}

std::string plan_to_json(const SchedulePlan& plan) {
  json j;
  j["platform"] = plan.platform;
  j["M"] = plan.num_little;
  j["N"] = plan.num_big;
  j["dense_ids"] = plan.dense_ids;
  j["sparse_ids"] = plan.sparse_ids;
  j["merged_groups"] = plan.merged_groups;
  json assignments = json::array();
  for (std::uint32_t p = 0; p < plan.little_assignments.size(); ++p) {
    for (const SubPartition& sp : plan.little_assignments[p]) {
      assignments.push_back({{"pipeline", p},
                             {"kind", "little"},
                             {"parent", sp.parent},
                             {"window_lo", sp.window_lo},
                             {"window_hi", sp.window_hi},
                             {"est_cycles", sp.est_cycles}});
    }
  }
  for (std::uint32_t p = 0; p < plan.big_assignments.size(); ++p) {
    for (const SubPartition& sp : plan.big_assignments[p]) {
      assignments.push_back({{"pipeline", plan.num_little + p},
                             {"kind", "big"},
                             {"parent", sp.parent},
                             {"window_lo", sp.window_lo},
                             {"window_hi", sp.window_hi},
                             {"est_cycles", sp.est_cycles}});
    }
  }
  j["assignments"] = std::move(assignments);
  j["est_makespan"] = plan.est_makespan;
  return j.dump(2);
}

SchedulePlan plan_from_json(const std::string& text) {
  json j = json::parse(text);
  SchedulePlan plan;
  plan.platform = j.value("platform", "");
  plan.num_little = j.at("M").get<std::uint32_t>();
  plan.num_big = j.at("N").get<std::uint32_t>();
  plan.dense_ids = j.at("dense_ids").get<std::vector<std::uint32_t>>();
  plan.sparse_ids = j.at("sparse_ids").get<std::vector<std::uint32_t>>();
  plan.merged_groups = j.at("merged_groups").get<std::vector<std::vector<std::uint32_t>>>();
  plan.little_assignments.resize(plan.num_little);
  plan.big_assignments.resize(plan.num_big);
  for (const json& a : j.at("assignments")) {
    SubPartition sp;
    sp.parent = a.at("parent").get<std::uint32_t>();
    sp.window_lo = a.at("window_lo").get<std::uint32_t>();
    sp.window_hi = a.at("window_hi").get<std::uint32_t>();
    sp.est_cycles = a.at("est_cycles").get<std::int64_t>();
    std::uint32_t pipe = a.at("pipeline").get<std::uint32_t>();
    std::string kind = a.at("kind").get<std::string>();
    if (kind == "little") {
      HG_CHECK(pipe < plan.num_little, "little assignment pipeline out of range");
      plan.little_assignments[pipe].push_back(sp);
    } else if (kind == "big") {
      HG_CHECK(pipe >= plan.num_little && pipe < plan.num_pipelines(),
               "big assignment pipeline out of range");
      plan.big_assignments[pipe - plan.num_little].push_back(sp);
    } else {
      throw Error("unknown assignment kind: " + kind);
    }
  }
  plan.est_makespan = j.at("est_makespan").get<std::int64_t>();
  return plan;
}

}  // namespace hetgraph
