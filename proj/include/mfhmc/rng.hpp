#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mfhmc {

/// 64-bit finalizer of SplitMix64; used to derive stream identifiers.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based random stream (Philox4x32-10).
///
/// The generator key is the seed and the 128-bit counter is
/// (draw block, stream_id), so a stream is a pure function of
/// (seed, stream_id, counter). Two streams with different ids never share a
/// counter value, and any position can be reached in O(1) through seek().
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  /// Stream for chain/replica `chain_index` under `seed`.
  static RngStream for_chain(std::uint64_t seed, std::uint64_t chain_index) noexcept;

  /// Child stream with the same seed and an id derived from (stream_id, tag).
  RngStream derive(std::uint64_t tag) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t counter() const noexcept { return counter_; }
  void seek(std::uint64_t counter) noexcept { counter_ = counter; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution; one word per draw.
  double uniform() noexcept;

  /// Standard normal by Box-Muller (cosine branch); two words per call.
  double normal() noexcept;

  /// Fills `out` with standard normals, using both Box-Muller branches.
  /// Consumes 2*ceil(n/2) words regardless of the values produced.
  void fill_normal(std::span<double> out) noexcept;
  std::vector<double> normal_vector(std::size_t n);

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t index) const noexcept;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t counter_ = 0;

  // Cached Philox block; purely an optimization, not part of the stream state.
  std::uint64_t cached_index_ = ~std::uint64_t{0};
  std::array<std::uint32_t, 4> cached_{};
};

}  // namespace mfhmc
