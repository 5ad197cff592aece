#include "delaydyn/rng.hpp"

#include <cmath>
#include <sstream>

#include "delaydyn/errors.hpp"

namespace delaydyn {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t stream_index)
    : base_seed_(base_seed), stream_index_(stream_index) {
  // Push the stream index through the full SplitMix64 mix before combining
  // with the base seed; adjacent indices must not yield overlapping
  // expansions.
  SplitMix64 index_mix(stream_index);
  SplitMix64 expander(base_seed ^ index_mix.next());
  for (auto& word : s_) word = expander.next();
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) {
    s_[0] = 0x9e3779b97f4a7c15ULL;  // xoshiro state must not be all zero
  }
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256**
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

WienerIncrements wiener_increments(RngStream& stream, double dt,
                                   std::size_t n_steps, std::size_t n_dims) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    std::ostringstream os;
    os << "dt: must be finite and >= 0 (got " << dt << ")";
    throw ValidationError(os.str());
  }
  if (n_dims < 1) {
    throw ValidationError("n_dims: must be >= 1");
  }
  WienerIncrements w;
  w.n_steps = n_steps;
  w.n_dims = n_dims;
  w.data.resize(n_steps * n_dims);
  const double root_dt = std::sqrt(dt);
  for (auto& entry : w.data) entry = root_dt * stream.next_gaussian();
  return w;
}

}  // namespace delaydyn
