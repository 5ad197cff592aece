#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "delaydyn/config.hpp"
#include "delaydyn/csv.hpp"
#include "delaydyn/errors.hpp"
#include "delaydyn/rng.hpp"

using namespace delaydyn;

namespace {

std::string write_temp_json(const std::string& body) {
  static int counter = 0;
  const std::string path = "delaydyn_cfg_" + std::to_string(counter++) +
                           ".json";
  std::ofstream out(path);
  out << body;
  out.close();
  return path;
}

}  // namespace

TEST_CASE("tau grid parsing") {
  SUBCASE("range form start:step:stop") {
    const auto grid = parse_tau_grid("0.3:0.02:0.6");
    REQUIRE(grid.size() == 16);
    CHECK(grid.front() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(grid.back() == doctest::Approx(0.6).epsilon(1e-12));
  }

  SUBCASE("comma list") {
    const auto grid = parse_tau_grid("0.1,0.3,0.6,0.9");
    REQUIRE(grid.size() == 4);
    CHECK(grid[2] == 0.6);
  }

  SUBCASE("bad specs are rejected") {
    CHECK_THROWS_AS(parse_tau_grid(""), ValidationError);
    CHECK_THROWS_AS(parse_tau_grid("0.5:-0.1:0.9"), ValidationError);
    CHECK_THROWS_AS(parse_tau_grid("0.9,0.3"), ValidationError);
    CHECK_THROWS_AS(parse_tau_grid("a,b"), ValidationError);
  }
}

TEST_CASE("json config loading") {
  SUBCASE("values applied over defaults") {
    const std::string path = write_temp_json(
        R"({"r": 0.9, "t-end": 25.5, "model": "model2", "n-runs": 17})");
    RunConfig cfg;
    apply_json_config(path, cfg);
    CHECK(cfg.params.r == 0.9);
    CHECK(cfg.t_end == 25.5);
    CHECK(cfg.model == "model2");
    CHECK(cfg.n_runs == 17);
    CHECK(cfg.params.K == 5.0);  // untouched default
    std::remove(path.c_str());
  }

  SUBCASE("unknown keys are named") {
    const std::string path = write_temp_json(R"({"carrying": 5})");
    RunConfig cfg;
    try {
      apply_json_config(path, cfg);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("carrying") != std::string::npos);
    }
    std::remove(path.c_str());
  }

  SUBCASE("type mismatches are named") {
    const std::string path = write_temp_json(R"({"K": "five"})");
    RunConfig cfg;
    try {
      apply_json_config(path, cfg);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("K") != std::string::npos);
    }
    std::remove(path.c_str());
  }
}

TEST_CASE("run config validation names the offending key") {
  RunConfig cfg;
  cfg.params.K = -1.0;
  try {
    validate_run_config(cfg);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("K") != std::string::npos);
  }

  cfg = RunConfig{};
  cfg.transient_fraction = 1.0;
  CHECK_THROWS_AS(validate_run_config(cfg), ValidationError);

  cfg = RunConfig{};
  cfg.model = "model3";
  CHECK_THROWS_AS(validate_run_config(cfg), ValidationError);
}

TEST_CASE("scheme resolution follows the per-model defaults") {
  RunConfig cfg;
  cfg.model = "deterministic";
  CHECK(resolve_scheme(cfg) == Scheme::RK4);
  cfg.model = "model1";
  CHECK(resolve_scheme(cfg) == Scheme::Milstein);
  cfg.model = "model2";
  CHECK(resolve_scheme(cfg) == Scheme::EulerMaruyama);
  cfg.scheme = "milstein";
  CHECK(resolve_scheme(cfg) == Scheme::Milstein);  // allowed, reduced-order
  cfg.model = "deterministic";
  CHECK_THROWS_AS(resolve_scheme(cfg), ValidationError);
  cfg.model = "model1";
  cfg.scheme = "rk4";
  CHECK_THROWS_AS(resolve_scheme(cfg), ValidationError);
}

TEST_CASE("formatted doubles round-trip exactly") {
  RngStream gen(31, 0);
  for (int i = 0; i < 5000; ++i) {
    double v = (gen.next_double() - 0.5) *
               std::pow(10.0, 300.0 * (gen.next_double() - 0.5));
    const std::string s = format_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(std::strtod(format_double(0.0).c_str(), nullptr) == 0.0);
  CHECK(std::isnan(std::strtod(
      format_double(std::nan("")).c_str(), nullptr)));
}
