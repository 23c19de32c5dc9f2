#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hetgraph/config.hpp"

namespace hetgraph {

/// Behavioural model of one HBM channel. Contents are block-addressable
/// (block = s_mem bits); sequential reads stream one block per cycle after
/// the base latency, strided reads pay the clamped linear latency of
/// MemoryLatencyModel. Timing is reported in 1/kQ cycle units.
class Channel {
 public:
  Channel(std::uint64_t capacity_bytes, MemoryLatencyModel latency, std::uint32_t block_bytes);

  std::uint32_t block_bytes() const { return block_bytes_; }
  std::uint64_t capacity_bytes() const { return capacity_; }
  const MemoryLatencyModel& latency() const { return latency_; }

  /// Writes block-aligned data; grows the backing store on demand.
  /// Exceeding the channel capacity raises the out-of-memory condition.
  void write_blocks(std::uint64_t block_lo, std::span<const std::byte> data);

  struct BurstRead {
    std::span<const std::byte> data;
    std::int64_t cycles_q = 0;
  };
  /// Sequential read of n blocks: b + n cycles.
  BurstRead burst_read(std::uint64_t block_lo, std::uint64_t n);

  struct RandomRead {
    std::span<const std::byte> data;
    std::int64_t cycles_q = 0;
  };
  /// Single-block read at a stride from prev_block:
  /// clamp(a * |block - prev_block| * block_bytes + b, l_min, l_max).
  RandomRead random_read(std::uint64_t block, std::uint64_t prev_block);

  /// Functional view of written contents without transfer accounting.
  /// Simulated pipelines decode values through this; their timing flows
  /// through the accounting calls.
  std::span<const std::byte> data_view(std::uint64_t block_lo, std::uint64_t n) const {
    return view(block_lo, n);
  }

  /// Counter-only accounting for streams whose payload lives outside the
  /// channel (the edge stream of a simulated pipeline).
  void record_stream(std::uint64_t blocks, std::int64_t cycles_q);
  void add_busy_q(std::int64_t cycles_q) { cycles_busy_q_ += cycles_q; }

  std::uint64_t reads_issued() const { return reads_issued_; }
  std::uint64_t blocks_transferred() const { return blocks_transferred_; }
  std::int64_t cycles_busy_q() const { return cycles_busy_q_; }

 private:
  std::span<const std::byte> view(std::uint64_t block_lo, std::uint64_t n) const;

  std::uint64_t capacity_;
  MemoryLatencyModel latency_;
  std::uint32_t block_bytes_;
  std::vector<std::byte> contents_;

  std::uint64_t reads_issued_ = 0;
  std::uint64_t blocks_transferred_ = 0;
  std::int64_t cycles_busy_q_ = 0;
};

inline std::int64_t cycles_from_q(std::int64_t q) {
  return (q + MemoryLatencyModel::kQ - 1) / MemoryLatencyModel::kQ;
}

}  // namespace hetgraph
