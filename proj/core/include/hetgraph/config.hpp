#pragma once

#include <cstdint>
#include <string>

#include "hetgraph/types.hpp"

namespace hetgraph {

/// Latency of a strided read, modelled as a clamped linear function of the
/// access distance in bytes: clamp(a*d + b, l_min, l_max) cycles.
///
/// Coefficients are quantized to 1/kQ cycle so that the cost model, the
/// channel model and calibration all evaluate the same exact rationals.
struct MemoryLatencyModel {
  static constexpr std::int64_t kQ = 1 << 20;

  std::int64_t a_q = 0;      // cycles per byte, scaled by kQ
  std::int64_t b_q = 0;      // base cycles, scaled by kQ
  std::int64_t l_min = 2;    // clamp bounds, whole cycles
  std::int64_t l_max = 128;

  static MemoryLatencyModel from_coeffs(double a, double b,
                                        std::int64_t l_min = 2,
                                        std::int64_t l_max = 128);

  double a() const { return static_cast<double>(a_q) / kQ; }
  double b() const { return static_cast<double>(b_q) / kQ; }

  /// Clamped latency for a byte distance, in 1/kQ cycle units.
  std::int64_t latency_q(std::uint64_t dist_bytes) const;
  /// Same, rounded up to whole cycles.
  std::int64_t latency_cycles(std::uint64_t dist_bytes) const;

  void validate() const;
};

/// Architectural symbols of one processing pipeline. Widths are in bits.
struct PipelineConfig {
  std::uint32_t n_spe = 8;
  std::uint32_t n_gpe = 8;
  std::uint32_t ii_spe = 1;
  std::uint32_t ii_gpe = 1;
  std::uint32_t s_mem = 512;              // memory block width
  std::uint32_t s_e = 64;                 // edge record width (96 with weight)
  std::uint32_t s_vprop = 32;             // vertex property width
  std::uint32_t s_ram = 64;               // gather-buffer port width
  std::uint64_t s_buf = 65536ull * 32;    // gather buffer size per PE
  std::uint64_t ppb_size = 32ull * 1024 * 8;  // ping-pong buffer total size
  std::int64_t c_const = 2000;            // partition-switch overhead, cycles

  /// Destination vertices one Gather PE can buffer; equals the partition
  /// interval size U.
  std::uint32_t buffered_vertices() const {
    return static_cast<std::uint32_t>(s_buf / s_vprop);
  }
  std::uint32_t props_per_block() const { return s_mem / s_vprop; }
  std::uint32_t prop_bytes() const { return s_vprop / 8; }
  std::uint32_t block_bytes() const { return s_mem / 8; }
  /// Properties held by one half of the ping-pong buffer.
  std::uint32_t ppb_half_props() const {
    return static_cast<std::uint32_t>(ppb_size / 2 / s_vprop);
  }
  std::uint32_t ppb_half_blocks() const {
    return static_cast<std::uint32_t>(ppb_size / 2 / s_mem);
  }

  /// Shrinks the gather buffer to hold exactly `interval_size` vertices.
  /// Desk-scale graphs use much smaller partitions than the default U.
  void set_partition_capacity(std::uint32_t interval_size) {
    s_buf = static_cast<std::uint64_t>(interval_size) * s_vprop;
  }

  void validate() const;
};

struct PlatformConfig {
  std::uint32_t n_ch = 32;    // HBM channels
  std::uint32_t n_port = 32;  // memory ports
  std::uint32_t n_res = 4;    // ports reserved for Apply
  std::uint64_t channel_capacity = 256ull * 1024 * 1024;  // bytes
  std::string name = "u280";

  void validate() const;
};

/// min(N_ch, floor((N_port - N_res) / 2)): each pipeline occupies two
/// memory ports and at most one pipeline is paired per channel pair.
std::uint32_t max_pipelines(const PlatformConfig& p);

struct Config {
  PipelineConfig pipeline;
  MemoryLatencyModel memory = MemoryLatencyModel::from_coeffs(0.02, 32.0);
  PlatformConfig platform;
};

/// Loads a config file; `.json` or a flat TOML subset with [pipeline],
/// [memory] and [platform] tables. Unknown keys are an error.
Config load_config(const std::string& path);
Config parse_config_text(const std::string& text, bool json);
std::string config_to_json(const Config& cfg);

}  // namespace hetgraph
