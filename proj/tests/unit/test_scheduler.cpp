#include <doctest.h>

#include <random>

#include "hetgraph/rmat.hpp"
#include "hetgraph/scheduler.hpp"
#include "test_helpers.hpp"

using namespace hetgraph;

namespace {

// A partition whose edges all target its own interval; `blocks` controls
// how many distinct source blocks each issue set touches, steering the
// Big/Little estimate ratio.
Partition synthetic_partition(std::uint32_t index, std::uint32_t interval,
                              std::uint32_t num_vertices, std::uint64_t edges,
                              std::uint32_t src_span, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Partition p;
  p.index = index;
  p.vtx_lo = index * interval;
  p.vtx_hi = std::min<std::uint32_t>(num_vertices, (index + 1) * interval);
  std::vector<Edge> e;
  for (std::uint64_t i = 0; i < edges; ++i) {
    e.push_back({static_cast<VertexId>(rng() % src_span),
                 static_cast<VertexId>(p.vtx_lo + rng() % (p.vtx_hi - p.vtx_lo)), 1});
  }
  std::stable_sort(e.begin(), e.end(), [](const Edge& a, const Edge& b) { return a.src < b.src; });
  p.edges = std::move(e);
  return p;
}

PipelineConfig small_cfg() {
  PipelineConfig cfg;
  cfg.set_partition_capacity(512);
  return cfg;
}

MemoryLatencyModel default_mem() { return MemoryLatencyModel::from_coeffs(0.02, 32, 2, 128); }

}  // namespace

TEST_CASE("pipeline mix selection balances cluster times") {
  SUBCASE("five pipelines, work split 3:2 toward dense") {
    // The schematic scheduling example: two dense partitions worth three
    // fifths of the work on three Little pipelines, four sparse partitions
    // worth two fifths on two Big pipelines.
    auto [m, n] = choose_pipeline_mix(3000, 2000, 5);
    CHECK(m == 3);
    CHECK(n == 2);
  }
  SUBCASE("equal cluster times on an even count split evenly") {
    auto [m, n] = choose_pipeline_mix(5000, 5000, 8);
    CHECK(m == n);
  }
  SUBCASE("no dense work concedes every pipeline to Big") {
    auto [m, n] = choose_pipeline_mix(0, 1234, 6);
    CHECK(m == 0);
    CHECK(n == 6);
  }
  SUBCASE("no sparse work concedes every pipeline to Little") {
    auto [m, n] = choose_pipeline_mix(999, 0, 6);
    CHECK(m == 6);
    CHECK(n == 0);
  }
  SUBCASE("ties break toward more Big pipelines") {
    // dense == sparse on an odd count: (2,3) and (3,2) mirror each other.
    auto [m, n] = choose_pipeline_mix(1000, 1000, 5);
    CHECK(m == 2);
    CHECK(n == 3);
  }
  SUBCASE("matches a brute-force argmin") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 200; ++trial) {
      std::int64_t d = rng() % 100000 + 1;
      std::int64_t s = rng() % 100000 + 1;
      std::uint32_t n_pip = 2 + rng() % 13;
      auto [m, n] = choose_pipeline_mix(d, s, n_pip);
      long double best = 1e30L;
      for (std::uint32_t mm = 1; mm < n_pip; ++mm) {
        long double obj = std::abs(static_cast<long double>(d) / mm -
                                   static_cast<long double>(s) / (n_pip - mm));
        best = std::min(best, obj);
      }
      long double got = std::abs(static_cast<long double>(d) / m -
                                 static_cast<long double>(s) / n);
      CHECK(got <= best + 1e-9L);
    }
  }
  SUBCASE("both clusters need a pipeline") {
    CHECK_THROWS_AS(choose_pipeline_mix(10, 10, 1), Error);
  }
}

TEST_CASE("classification marks scattered-source partitions sparse") {
  PipelineConfig cfg = small_cfg();
  MemoryLatencyModel mem = default_mem();
  // Partition 0: many edges, compact sources. Partitions 1..5: few edges,
  // sources scattered over the whole id space.
  std::vector<Partition> parts;
  parts.push_back(synthetic_partition(0, 512, 4096, 20000, 2048, 1));
  for (std::uint32_t i = 1; i < 6; ++i) {
    parts.push_back(synthetic_partition(i, 512, 4096, 150, 4096, i + 1));
  }
  ClassifyResult cls = classify_partitions(parts, cfg, mem);
  CHECK(cls.dense_ids == std::vector<std::uint32_t>{0});
  CHECK(cls.sparse_ids == std::vector<std::uint32_t>{1, 2, 3, 4, 5});

  SUBCASE("labeling attains the per-partition minimum") {
    std::mt19937_64 rng(3);
    std::int64_t n_gpe = cfg.n_gpe;
    auto amortized_big = [&](std::uint32_t id) {
      CycleEstimate big = estimate_partition(parts[id], PipelineKind::Big, cfg, mem);
      return ((n_gpe * big.sum_max + big.store + big.const_overhead) + n_gpe - 1) / n_gpe;
    };
    std::int64_t chosen = 0;
    for (std::uint32_t id : cls.dense_ids) chosen += cls.t_little[id];
    for (std::uint32_t id : cls.sparse_ids) chosen += amortized_big(id);
    CHECK(chosen == cls.total_min);
    for (int trial = 0; trial < 50; ++trial) {
      std::int64_t other = 0;
      for (std::uint32_t id = 0; id < parts.size(); ++id) {
        other += (rng() & 1) ? cls.t_little[id] : amortized_big(id);
      }
      CHECK(chosen <= other);
    }
  }
}

TEST_CASE("six partitions on five pipelines split 2 dense / 4 sparse into (3,2)") {
  // Schematic scheduling scenario: with four gather PEs, the four sparse
  // partitions merge into one group handled by two Big pipelines while the
  // two dense partitions spread over three Little pipelines.
  PipelineConfig cfg;
  cfg.n_gpe = 4;
  cfg.set_partition_capacity(512);
  MemoryLatencyModel mem = default_mem();

  std::vector<Partition> parts;
  for (std::uint32_t i = 0; i < 2; ++i) {
    parts.push_back(synthetic_partition(i, 512, 3072, 20000, 1024, i + 1));
  }
  for (std::uint32_t i = 2; i < 6; ++i) {
    parts.push_back(synthetic_partition(i, 512, 3072, 200, 3072, i + 1));
  }
  build_windows(parts, 256);

  ClassifyResult cls = classify_partitions(parts, cfg, mem);
  CHECK(cls.dense_ids == std::vector<std::uint32_t>{0, 1});
  CHECK(cls.sparse_ids == std::vector<std::uint32_t>{2, 3, 4, 5});

  SchedulePlan plan = plan_schedule(parts, cfg, mem, 5);
  CHECK(plan.num_little == 3);
  CHECK(plan.num_big == 2);
  REQUIRE(plan.merged_groups.size() == 1);
  CHECK(plan.merged_groups[0] == std::vector<std::uint32_t>{2, 3, 4, 5});
  for (const auto& tasks : plan.big_assignments) CHECK_FALSE(tasks.empty());
  for (const auto& tasks : plan.little_assignments) CHECK_FALSE(tasks.empty());
  validate_plan(plan, parts);
}

TEST_CASE("uniform ring classifies every partition identically") {
  std::vector<Edge> edges;
  for (VertexId v = 0; v < 512; ++v) edges.push_back({v, static_cast<VertexId>((v + 1) % 512)});
  Graph g = test::make_graph(512, std::move(edges));
  auto parts = partition_graph(g, 64);
  PipelineConfig cfg;
  cfg.set_partition_capacity(64);
  ClassifyResult cls = classify_partitions(parts, cfg, default_mem());
  CHECK((cls.dense_ids.empty() || cls.sparse_ids.empty()));
}

TEST_CASE("quantile cuts balance and conserve windows") {
  SUBCASE("uniform windows differ by at most one per pipeline") {
    for (std::uint32_t k : {2u, 3u, 5u, 7u}) {
      std::vector<CutItem> items;
      for (std::uint32_t w = 0; w < 40; ++w) items.push_back({0, w, 10});
      auto cut = cut_cluster(items, k);
      std::vector<std::uint64_t> counts;
      for (auto& tasks : cut) {
        std::uint64_t c = 0;
        for (auto& sp : tasks) c += sp.window_hi - sp.window_lo;
        counts.push_back(c);
      }
      auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      CHECK(*hi - *lo <= 1);
    }
  }
  SUBCASE("single pipeline receives everything") {
    std::vector<CutItem> items;
    for (std::uint32_t w = 0; w < 13; ++w) items.push_back({2, w, 1 + w % 3});
    auto cut = cut_cluster(items, 1);
    REQUIRE(cut.size() == 1);
    REQUIRE(cut[0].size() == 1);
    CHECK(cut[0][0].window_lo == 0);
    CHECK(cut[0][0].window_hi == 13);
  }
  SUBCASE("random weights respect the balance bound") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      std::uint32_t k = 2 + rng() % 8;
      std::vector<CutItem> items;
      std::int64_t total = 0, max_w = 0;
      std::uint32_t n = 5 + rng() % 60;
      for (std::uint32_t w = 0; w < n; ++w) {
        std::int64_t weight = rng() % 1000;
        items.push_back({0, w, weight});
        total += weight;
        max_w = std::max(max_w, weight);
      }
      auto cut = cut_cluster(items, k);
      std::uint64_t windows_seen = 0;
      for (auto& tasks : cut) {
        std::int64_t load = 0;
        for (auto& sp : tasks) {
          load += sp.est_cycles;
          windows_seen += sp.window_hi - sp.window_lo;
        }
        // load <= total/k + max_w, compared exactly
        CHECK(load * k <= total + max_w * k);
      }
      CHECK(windows_seen == n);
    }
  }
}

TEST_CASE("full planning composes and validates") {
  PipelineConfig cfg = small_cfg();
  MemoryLatencyModel mem = default_mem();
  Graph g = generate_rmat({12, 16, 31});
  auto [gg, perm] = dbg_reorder(g);
  auto parts = partition_graph(gg, 512);
  build_windows(parts, 1024);

  SchedulePlan plan = plan_schedule(parts, cfg, mem, 6, "test");
  CHECK(plan.num_pipelines() == 6);
  CHECK(plan.num_little >= 1);
  validate_plan(plan, parts);

  SUBCASE("sparse groups chunk in index order") {
    std::uint32_t seen = 0;
    for (auto& group : plan.merged_groups) {
      CHECK(group.size() <= cfg.n_gpe);
      for (std::size_t i = 1; i < group.size(); ++i) CHECK(group[i - 1] < group[i]);
      seen += static_cast<std::uint32_t>(group.size());
    }
    CHECK(seen == plan.sparse_ids.size());
  }
  SUBCASE("every edge lands in exactly one task") {
    // validate_plan covers windows; cross-check edge totals.
    std::uint64_t edges_in_plan = 0;
    for (auto& tasks : plan.little_assignments) {
      for (auto& sp : tasks) {
        for (std::uint32_t w = sp.window_lo; w < sp.window_hi; ++w) {
          edges_in_plan += parts[sp.parent].windows[w].edge_hi - parts[sp.parent].windows[w].edge_lo;
        }
      }
    }
    for (auto& tasks : plan.big_assignments) {
      for (auto& sp : tasks) {
        std::uint32_t base = 0;
        for (std::uint32_t id : plan.merged_groups[sp.parent]) {
          for (std::uint32_t w = 0; w < parts[id].windows.size(); ++w) {
            if (base + w >= sp.window_lo && base + w < sp.window_hi) {
              edges_in_plan += parts[id].windows[w].edge_hi - parts[id].windows[w].edge_lo;
            }
          }
          base += static_cast<std::uint32_t>(parts[id].windows.size());
        }
      }
    }
    CHECK(edges_in_plan == gg.num_edges());
  }
  SUBCASE("plan JSON round-trips") {
    SchedulePlan back = plan_from_json(plan_to_json(plan));
    CHECK(back.num_little == plan.num_little);
    CHECK(back.num_big == plan.num_big);
    CHECK(back.dense_ids == plan.dense_ids);
    CHECK(back.merged_groups == plan.merged_groups);
    CHECK(back.est_makespan == plan.est_makespan);
    REQUIRE(back.little_assignments.size() == plan.little_assignments.size());
    for (std::size_t i = 0; i < plan.little_assignments.size(); ++i) {
      REQUIRE(back.little_assignments[i].size() == plan.little_assignments[i].size());
      for (std::size_t j = 0; j < plan.little_assignments[i].size(); ++j) {
        CHECK(back.little_assignments[i][j].window_lo == plan.little_assignments[i][j].window_lo);
        CHECK(back.little_assignments[i][j].est_cycles == plan.little_assignments[i][j].est_cycles);
      }
    }
    validate_plan(back, parts);
  }
  SUBCASE("forced homogeneous mixes reassign everything") {
    SchedulePlan all_big = plan_with_mix(parts, cfg, mem, 0, 6);
    CHECK(all_big.dense_ids.empty());
    validate_plan(all_big, parts);
    SchedulePlan all_little = plan_with_mix(parts, cfg, mem, 6, 0);
    CHECK(all_little.sparse_ids.empty());
    validate_plan(all_little, parts);
  }
}

TEST_CASE("empty graph plans to zero work") {
  std::vector<Partition> parts;
  PipelineConfig cfg = small_cfg();
  SchedulePlan plan = plan_schedule(parts, cfg, default_mem(), 4);
  CHECK(plan.est_makespan == 0);
  CHECK(plan.num_pipelines() == 4);
  for (auto& tasks : plan.little_assignments) CHECK(tasks.empty());
  for (auto& tasks : plan.big_assignments) CHECK(tasks.empty());
}

TEST_CASE("planning is deterministic") {
  Graph g = generate_rmat({11, 16, 8});
  auto [gg, perm] = dbg_reorder(g);
  PipelineConfig cfg = small_cfg();
  auto parts1 = partition_graph(gg, 512);
  build_windows(parts1, 1024);
  auto parts2 = partition_graph(gg, 512);
  build_windows(parts2, 1024);
  std::string a = plan_to_json(plan_schedule(parts1, cfg, default_mem(), 8));
  std::string b = plan_to_json(plan_schedule(parts2, cfg, default_mem(), 8));
  CHECK(a == b);
}
