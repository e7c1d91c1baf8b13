#include "mfhmc/rng.hpp"

#include <cmath>
#include <numbers>

namespace mfhmc {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline double to_unit(std::uint64_t word) { return static_cast<double>(word >> 11) * kTwoPow53Inv; }

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id) {}

RngStream RngStream::for_chain(std::uint64_t seed, std::uint64_t chain_index) noexcept {
  return RngStream(seed, mix64(seed ^ mix64(chain_index)));
}

RngStream RngStream::derive(std::uint64_t tag) const noexcept {
  return RngStream(seed_, mix64(stream_id_ ^ mix64(tag + 0x632BE59BD9B4E019ull)));
}

std::array<std::uint32_t, 4> RngStream::block(std::uint64_t index) const noexcept {
  std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                      static_cast<std::uint32_t>(stream_id_),
                                      static_cast<std::uint32_t>(stream_id_ >> 32)};
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return ctr;
}

std::uint64_t RngStream::next_u64() noexcept {
  const std::uint64_t index = counter_ >> 1;
  if (index != cached_index_) {
    cached_ = block(index);
    cached_index_ = index;
  }
  const unsigned lane = static_cast<unsigned>(counter_ & 1u) * 2u;
  ++counter_;
  return (static_cast<std::uint64_t>(cached_[lane + 1]) << 32) | cached_[lane];
}

double RngStream::uniform() noexcept { return to_unit(next_u64()); }

double RngStream::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void RngStream::fill_normal(std::span<double> out) noexcept {
  std::size_t i = 0;
  for (; i + 1 < out.size(); i += 2) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[i] = radius * std::cos(angle);
    out[i + 1] = radius * std::sin(angle);
  }
  if (i < out.size()) out[i] = normal();
}

std::vector<double> RngStream::normal_vector(std::size_t n) {
  std::vector<double> out(n);
  fill_normal(out);
  return out;
}

}  // namespace mfhmc
