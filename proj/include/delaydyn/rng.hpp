#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace delaydyn {

/// SplitMix64 — used only to expand seeds into xoshiro256** state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic random stream: xoshiro256** seeded by SplitMix64 expansion
/// of (base_seed, stream_index). Identical inputs produce the identical
/// sequence on every platform; distinct stream indices give statistically
/// independent streams, so ensemble run i can always use (base_seed, i).
///
/// A stream is single-owner: never share one instance across threads.
class RngStream {
 public:
  RngStream(std::uint64_t base_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double();

  /// Standard normal variate via the polar Box-Muller method. The method's
  /// only branches are the polar rejection test, which is exact in binary
  /// floating point, so sequences reproduce across platforms.
  double next_gaussian();

  std::uint64_t base_seed() const { return base_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t base_seed_{0};
  std::uint64_t stream_index_{0};
  double spare_{0.0};
  bool has_spare_{false};
};

/// Brownian increments: n_steps x n_dims matrix of N(0, dt) samples.
struct WienerIncrements {
  std::size_t n_steps{0};
  std::size_t n_dims{0};
  std::vector<double> data;  // row-major [step][dim]

  double at(std::size_t step, std::size_t dim) const {
    return data[step * n_dims + dim];
  }
};

/// Draws sqrt(dt)*N(0,1) entries in row-major order from `stream`.
/// dt == 0 yields an all-zero matrix. Throws ValidationError for dt < 0,
/// non-finite dt, or n_dims < 1.
WienerIncrements wiener_increments(RngStream& stream, double dt,
                                   std::size_t n_steps, std::size_t n_dims);

}  // namespace delaydyn
