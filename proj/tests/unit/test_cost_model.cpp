#include <doctest.h>

#include <random>

#include "hetgraph/calibrate.hpp"
#include "hetgraph/cost_model.hpp"
#include "test_helpers.hpp"

using namespace hetgraph;

namespace {

constexpr std::int64_t kQ = MemoryLatencyModel::kQ;

Partition single_partition(std::uint32_t num_vertices, std::vector<Edge> edges) {
  Graph g = test::make_graph(num_vertices, std::move(edges));
  auto parts = partition_graph(g, num_vertices);
  return parts.at(0);
}

PipelineConfig small_cfg() {
  PipelineConfig cfg;
  cfg.set_partition_capacity(1024);
  return cfg;
}

}  // namespace

TEST_CASE("per-set unit costs evaluate the architectural ratios") {
  PipelineConfig cfg;
  // Eight PEs at II=1 process an eighth of a cycle per edge, so one full
  // issue set costs exactly one cycle; same for 64-bit edges in 512-bit
  // blocks.
  CHECK(proc_set_cost_q(cfg) == kQ);
  CHECK(edge_set_cost_q(cfg) == kQ);

  PipelineConfig slow = cfg;
  // The faster PE bank sets the rate: gather at 8/4 loses to scatter at 8.
  slow.ii_gpe = 4;
  CHECK(proc_set_cost_q(slow) == kQ);
  // Both banks at II=4 drop the rate to 2 edges/cycle: 4 cycles per set.
  slow.ii_spe = 4;
  CHECK(proc_set_cost_q(slow) == 4 * kQ);

  PipelineConfig weighted = cfg;
  weighted.s_e = 128;
  CHECK(edge_set_cost_q(weighted) == 2 * kQ);
}

TEST_CASE("store cost follows the buffer and port widths") {
  PipelineConfig cfg = small_cfg();  // s_buf = 1024 * 32 bits
  CHECK(store_cycles(PipelineKind::Little, cfg) == 512);  // s_buf / s_ram
  CHECK(store_cycles(PipelineKind::Big, cfg) == 512);

  SUBCASE("single gather PE degenerates Big to Little") {
    PipelineConfig one = cfg;
    one.n_gpe = 1;
    CHECK(store_cycles(PipelineKind::Big, one) == store_cycles(PipelineKind::Little, one));
  }
  SUBCASE("port term binds for tiny buffers") {
    PipelineConfig tiny = cfg;
    tiny.s_buf = 64;  // flush is 1 cycle; Big port term 64*8/512 = 1
    CHECK(store_cycles(PipelineKind::Big, tiny) == 1);
  }
}

TEST_CASE("little vertex access charges the source stride in blocks") {
  PipelineConfig cfg = small_cfg();
  MemoryLatencyModel mem = MemoryLatencyModel::from_coeffs(0.02, 32, 2, 128);
  // Two full issue sets; the second set's closing source sits exactly 16
  // vertices (one block) after the first's.
  std::vector<Edge> edges;
  for (int i = 0; i < 8; ++i) edges.push_back({0, 0, 1});
  for (int i = 0; i < 7; ++i) edges.push_back({0, 1, 1});
  edges.push_back({16, 1, 1});
  Partition p = single_partition(64, std::move(edges));
  CycleEstimate est = estimate_partition(p, PipelineKind::Little, cfg, mem);
  // First set: half fill + b. Second set: stride 16 * 32 / 512 = 1 cycle.
  std::int64_t warmup = cfg.ppb_half_blocks() + 32;
  CHECK(est.sum_max == warmup + 1);
}

TEST_CASE("empty partition estimate is store plus switch overhead") {
  PipelineConfig cfg = small_cfg();
  MemoryLatencyModel mem = MemoryLatencyModel::from_coeffs(0.02, 32, 2, 128);
  Partition p;
  p.vtx_lo = 0;
  p.vtx_hi = 16;
  for (PipelineKind kind : {PipelineKind::Little, PipelineKind::Big}) {
    CycleEstimate est = estimate_partition(p, kind, cfg, mem);
    CHECK(est.total == est.store + cfg.c_const);
    CHECK(est.sum_max == 0);
  }
}

TEST_CASE("estimates respect the throughput lower bound") {
  PipelineConfig cfg = small_cfg();
  MemoryLatencyModel mem = MemoryLatencyModel::from_coeffs(0.02, 32, 2, 128);
  Graph g = test::random_graph(1024, 20000, 21);
  auto parts = partition_graph(g, 1024);
  for (PipelineKind kind : {PipelineKind::Little, PipelineKind::Big}) {
    CycleEstimate est = estimate_partition(parts[0], kind, cfg, mem);
    std::int64_t sets = (parts[0].num_edges() + cfg.n_spe - 1) / cfg.n_spe;
    CHECK(est.sum_max >= sets);  // each set costs at least one cycle
    CHECK(est.total == est.sum_max + est.store + est.const_overhead);
  }
}

TEST_CASE("appending edges never lowers the estimate") {
  PipelineConfig cfg = small_cfg();
  MemoryLatencyModel mem = MemoryLatencyModel::from_coeffs(0.02, 32, 2, 128);
  std::mt19937_64 rng(5);
  std::vector<Edge> edges;
  std::int64_t prev_little = 0, prev_big = 0;
  VertexId src = 0;
  for (int step = 0; step < 60; ++step) {
    src = std::min<VertexId>(1023, src + rng() % 40);
    edges.push_back({src, static_cast<VertexId>(rng() % 1024), 1});
    Partition p = single_partition(1024, edges);
    std::int64_t little = estimate_partition(p, PipelineKind::Little, cfg, mem).total;
    std::int64_t big = estimate_partition(p, PipelineKind::Big, cfg, mem).total;
    CHECK(little >= prev_little);
    CHECK(big >= prev_big);
    prev_little = little;
    prev_big = big;
  }
}

TEST_CASE("window estimates sum exactly to the partition term under any tiling") {
  PipelineConfig cfg = small_cfg();
  MemoryLatencyModel mem = MemoryLatencyModel::from_coeffs(0.02, 32, 2, 128);
  Graph g = test::random_graph(1024, 3000, 77);
  auto parts = partition_graph(g, 1024);
  Partition& p = parts[0];

  CycleEstimate little = estimate_partition(p, PipelineKind::Little, cfg, mem);
  CycleEstimate big = estimate_partition(p, PipelineKind::Big, cfg, mem);

  for (std::uint64_t window_size : {1ull, 7ull, 64ull, 333ull, 4096ull, 100000ull}) {
    build_windows(p, window_size);
    estimate_windows(p, cfg, mem);
    std::int64_t sum_l = 0, sum_b = 0;
    for (const Window& w : p.windows) {
      sum_l += w.est_cycles_little;
      sum_b += w.est_cycles_big;
    }
    CHECK(sum_l == little.sum_max);
    CHECK(sum_b == big.sum_max);
  }

  SUBCASE("single window equals the whole partition term") {
    build_windows(p, p.num_edges());
    estimate_windows(p, cfg, mem);
    REQUIRE(p.windows.size() == 1);
    CHECK(p.windows[0].est_cycles_little == little.sum_max);
    CHECK(p.windows[0].est_cycles_big == big.sum_max);
  }
  SUBCASE("uniform-stride halves split evenly") {
    // Sources advance one block per set, including the cold-start set, so
    // both halves cost the same under the Big model.
    std::vector<Edge> edges;
    for (int s = 1; s <= 64; ++s) {
      for (int i = 0; i < 8; ++i) edges.push_back({static_cast<VertexId>(s * 16), 0, 1});
    }
    Partition uniform = single_partition(2048, std::move(edges));
    build_windows(uniform, uniform.num_edges() / 2);
    estimate_windows(uniform, cfg, mem);
    REQUIRE(uniform.windows.size() == 2);
    // The first window carries the fill warmup; compare steady halves for Big.
    CHECK(uniform.windows[0].est_cycles_big == uniform.windows[1].est_cycles_big);
  }
}

TEST_CASE("calibration recovers the latency model") {
  PipelineConfig cfg;
  SimParams sim;

  SUBCASE("constant latency degenerates to a = 0") {
    MemoryLatencyModel flat = MemoryLatencyModel::from_coeffs(0.0, 24.0, 2, 128);
    CalibrationResult res = calibrate(flat, cfg, sim);
    CHECK(res.degenerate_fit);
    CHECK(res.memory.a() == 0.0);
    CHECK(res.memory.b() == doctest::Approx(24.0));
  }
  SUBCASE("linear model recovered within one percent") {
    MemoryLatencyModel truth = MemoryLatencyModel::from_coeffs(0.035, 48.0, 2, 4096);
    CalibrationResult res = calibrate(truth, cfg, sim);
    CHECK_FALSE(res.degenerate_fit);
    CHECK(std::abs(res.memory.a() - 0.035) / 0.035 < 0.01);
    CHECK(std::abs(res.memory.b() - 48.0) / 48.0 < 0.01);
  }
  SUBCASE("switch overhead recovered exactly from dummy runs") {
    MemoryLatencyModel truth = MemoryLatencyModel::from_coeffs(0.02, 32.0, 2, 128);
    SimParams odd;
    odd.switch_overhead = 3137;
    CalibrationResult res = calibrate(truth, cfg, odd);
    CHECK(res.c_const == 3137);
  }
}
