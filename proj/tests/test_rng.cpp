#include <doctest.h>

#include <cmath>
#include <vector>

#include "delaydyn/errors.hpp"
#include "delaydyn/rng.hpp"

using namespace delaydyn;

TEST_CASE("streams are deterministic and seed-sensitive") {
  SUBCASE("same seed, same stream") {
    RngStream a(42, 0);
    RngStream b(42, 0);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  }

  SUBCASE("distinct stream indices decorrelate") {
    RngStream a(42, 0);
    RngStream b(42, 1);
    int differing = 0;
    for (int i = 0; i < 1000; ++i) {
      differing += a.next_double() != b.next_double() ? 1 : 0;
    }
    CHECK(differing >= 990);
  }

  SUBCASE("distinct base seeds differ") {
    RngStream a(42, 0);
    RngStream b(43, 0);
    bool any_diff = false;
    for (int i = 0; i < 16; ++i) any_diff |= a.next_u64() != b.next_u64();
    CHECK(any_diff);
  }
}

// Golden values freeze the (base_seed, stream_index) -> sequence mapping;
// a change here would silently break reproducibility of archived runs.
TEST_CASE("golden first draws for seed (42, 0)") {
  RngStream s(42, 0);
  CHECK(s.next_u64() == 2303456275738999573ULL);
  RngStream g(42, 0);
  CHECK(g.next_gaussian() ==
        doctest::Approx(-0.69405643134534056).epsilon(1e-12));
  RngStream u(42, 0);
  CHECK(u.next_double() ==
        doctest::Approx(0.12487061491907958).epsilon(1e-15));
}

TEST_CASE("gaussian moments over one million draws") {
  RngStream s(7, 0);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = s.next_gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.005);
  CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("stream cross-correlation stays small") {
  RngStream a(99, 0);
  RngStream b(99, 1);
  const int n = 100000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    const double x = a.next_gaussian();
    const double y = b.next_gaussian();
    sa += x;
    sb += y;
    saa += x * x;
    sbb += y * y;
    sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double va = saa / n - (sa / n) * (sa / n);
  const double vb = sbb / n - (sb / n) * (sb / n);
  CHECK(std::abs(cov / std::sqrt(va * vb)) < 0.01);
}

TEST_CASE("wiener increments") {
  SUBCASE("dt = 0 gives the zero matrix") {
    RngStream s(5, 0);
    const WienerIncrements w = wiener_increments(s, 0.0, 100, 3);
    CHECK(w.n_steps == 100);
    CHECK(w.n_dims == 3);
    for (double v : w.data) CHECK(v == 0.0);
  }

  SUBCASE("sample variance matches dt") {
    RngStream s(5, 0);
    const double dt = 0.01;
    const WienerIncrements w = wiener_increments(s, dt, 100000, 1);
    double sum = 0, sum_sq = 0;
    for (double v : w.data) {
      sum += v;
      sum_sq += v * v;
    }
    const double n = static_cast<double>(w.data.size());
    const double var = sum_sq / n - (sum / n) * (sum / n);
    CHECK(var > 0.0097);
    CHECK(var < 0.0103);
  }

  SUBCASE("same stream state reproduces the matrix") {
    RngStream a(11, 4);
    RngStream b(11, 4);
    const WienerIncrements wa = wiener_increments(a, 0.02, 500, 2);
    const WienerIncrements wb = wiener_increments(b, 0.02, 500, 2);
    CHECK(wa.data == wb.data);
  }

  SUBCASE("negative dt is rejected") {
    RngStream s(5, 0);
    CHECK_THROWS_AS(wiener_increments(s, -0.01, 10, 1), ValidationError);
  }

  SUBCASE("all entries finite") {
    RngStream s(5, 1);
    const WienerIncrements w = wiener_increments(s, 0.5, 10000, 2);
    for (double v : w.data) CHECK(std::isfinite(v));
  }
}
