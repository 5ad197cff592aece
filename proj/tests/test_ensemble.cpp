#include <doctest.h>

#include <cmath>
#include <vector>

#include "delaydyn/ensemble.hpp"
#include "delaydyn/errors.hpp"

using namespace delaydyn;

namespace {

ModelParams paper_params(double sigma, double tau, double nu = 0.0) {
  ModelParams p;
  p.r = 0.8;
  p.K = 5.0;
  p.beta = 0.5;
  p.sigma = sigma;
  p.a = 0.3;
  p.tau = tau;
  p.nu1 = nu;
  p.nu2 = nu;
  return p;
}

SolverConfig quick_config(double t_end, double tau, Scheme scheme) {
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = t_end;
  cfg.tau = tau;
  cfg.scheme = scheme;
  return cfg;
}

Trajectory make_trajectory(std::vector<State> states, double dt = 0.1) {
  Trajectory t;
  t.t0 = 0.0;
  t.dt = dt;
  t.drifts.assign(states.size(), Rates{});
  t.states = std::move(states);
  return t;
}

}  // namespace

TEST_CASE("single-run ensemble equals the bare integration") {
  const auto model = StochasticModel::model1(paper_params(1.0 / 3.0, 0.5, 0.1));
  const auto psi = default_history();
  const SolverConfig cfg = quick_config(5.0, 0.5, Scheme::Milstein);
  const EnsembleResult res = run_ensemble(model, psi, cfg, 1, 42);
  RngStream stream(42, 0);
  const Trajectory direct = integrate_sdde(model, psi, cfg, stream);
  REQUIRE(res.mean_trajectory.n_nodes() == direct.n_nodes());
  for (std::size_t i = 0; i < direct.n_nodes(); ++i) {
    CHECK(res.mean_trajectory.states[i].x == direct.states[i].x);
    CHECK(res.mean_trajectory.states[i].y == direct.states[i].y);
  }
  CHECK(res.final_states[0].x == direct.states.back().x);
}

TEST_CASE("noise-free runs are identical and the mean matches them") {
  const auto model = StochasticModel::model1(paper_params(0.01, 0.2, 0.0));
  const auto psi = default_history();
  const SolverConfig cfg = quick_config(5.0, 0.2, Scheme::EulerMaruyama);
  const EnsembleResult res = run_ensemble(model, psi, cfg, 10, 7);
  RngStream stream(7, 0);
  const Trajectory one = integrate_sdde(model, psi, cfg, stream);
  for (std::size_t i = 0; i < one.n_nodes(); ++i) {
    CHECK(res.mean_trajectory.states[i].x ==
          doctest::Approx(one.states[i].x).epsilon(1e-14));
    CHECK(res.mean_trajectory.states[i].y ==
          doctest::Approx(one.states[i].y).epsilon(1e-14));
  }
  for (const State& f : res.final_states) {
    CHECK(f.x == res.final_states[0].x);
    CHECK(f.y == res.final_states[0].y);
  }
}

TEST_CASE("ensemble output is identical across thread counts") {
  const auto model = StochasticModel::model2(paper_params(1.0 / 3.0, 0.3));
  const auto psi = default_history();
  const SolverConfig cfg = quick_config(10.0, 0.3, Scheme::EulerMaruyama);
  const EnsembleResult serial = run_ensemble(model, psi, cfg, 12, 5, 1e-3, 1);
  const EnsembleResult parallel = run_ensemble(model, psi, cfg, 12, 5, 1e-3, 4);
  REQUIRE(serial.mean_trajectory.n_nodes() == parallel.mean_trajectory.n_nodes());
  for (std::size_t i = 0; i < serial.mean_trajectory.n_nodes(); ++i) {
    CHECK(serial.mean_trajectory.states[i].x ==
          parallel.mean_trajectory.states[i].x);
    CHECK(serial.mean_trajectory.states[i].y ==
          parallel.mean_trajectory.states[i].y);
  }
  REQUIRE(serial.extinction_times.size() == parallel.extinction_times.size());
  for (std::size_t i = 0; i < serial.extinction_times.size(); ++i) {
    CHECK(serial.extinction_times[i].has_value() ==
          parallel.extinction_times[i].has_value());
    if (serial.extinction_times[i]) {
      CHECK(*serial.extinction_times[i] == *parallel.extinction_times[i]);
    }
  }
}

TEST_CASE("extinction time scans nodes") {
  SUBCASE("finds the first crossing") {
    auto traj = make_trajectory({{1, 2}, {1, 1}, {1, 0.5}, {1, 0}, {1, 0}});
    traj.dt = 1.4;
    const auto t = extinction_time(traj, 0.0);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(4.2).epsilon(1e-15));
  }

  SUBCASE("absent when the predator persists") {
    const auto traj = make_trajectory({{1, 2}, {1, 1.5}, {1, 1.2}});
    CHECK_FALSE(extinction_time(traj, 1e-3).has_value());
  }

  SUBCASE("a larger threshold never extinguishes later") {
    RngStream gen(13, 0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<State> states;
      double y = 2.0;
      for (int i = 0; i < 50; ++i) {
        y = std::max(0.0, y + 0.4 * (gen.next_double() - 0.55));
        states.push_back({1.0, y});
      }
      const auto traj = make_trajectory(std::move(states));
      const double th1 = 0.2 * gen.next_double();
      const double th2 = th1 + 0.2 * gen.next_double();
      const auto t1 = extinction_time(traj, th1);
      const auto t2 = extinction_time(traj, th2);
      if (t1.has_value()) {
        REQUIRE(t2.has_value());
        CHECK(*t2 <= *t1);
      }
    }
  }
}

TEST_CASE("post-transient extrema") {
  SUBCASE("constant trajectory") {
    const auto traj = make_trajectory(std::vector<State>(10, State{2.0, 0.5}));
    const Extrema e = post_transient_extrema(traj, 0.5);
    CHECK(e.x_min == 2.0);
    CHECK(e.x_max == 2.0);
    CHECK(e.y_min == 0.5);
    CHECK(e.y_max == 0.5);
  }

  SUBCASE("sine amplitude recovered within a node") {
    std::vector<State> states;
    const double dt = 0.05;
    for (int i = 0; i <= 4000; ++i) {
      states.push_back({1.5 + 0.7 * std::sin(0.37 * i * dt), 1.0});
    }
    auto traj = make_trajectory(std::move(states), dt);
    const Extrema e = post_transient_extrema(traj, 0.25);
    CHECK(e.x_min == doctest::Approx(0.8).epsilon(1e-3));
    CHECK(e.x_max == doctest::Approx(2.2).epsilon(1e-3));
  }

  SUBCASE("almost-total transient fraction empties the window") {
    const auto traj = make_trajectory(std::vector<State>(10, State{1.0, 1.0}));
    CHECK_THROWS_AS(post_transient_extrema(traj, 0.999), EmptyWindowError);
  }

  SUBCASE("fraction outside [0,1) is invalid") {
    const auto traj = make_trajectory(std::vector<State>(10, State{1.0, 1.0}));
    CHECK_THROWS_AS(post_transient_extrema(traj, 1.0), ValidationError);
    CHECK_THROWS_AS(post_transient_extrema(traj, -0.1), ValidationError);
  }
}

TEST_CASE("crossover interpolation") {
  SUBCASE("midpoint of an antisymmetric sign change") {
    std::vector<CrossoverResult::Row> rows{{0.6, 1.0, 2.0}, {1.0, 2.0, 1.0}};
    const auto t = crossover_point(rows);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(0.8).epsilon(1e-15));
  }

  SUBCASE("constant sign means no crossover") {
    std::vector<CrossoverResult::Row> rows{{0.4, 1.0, 2.0}, {0.8, 1.5, 2.0},
                                           {1.2, 1.9, 2.0}};
    CHECK_FALSE(crossover_point(rows).has_value());
  }

  SUBCASE("exact zero lands on the grid point") {
    std::vector<CrossoverResult::Row> rows{{0.4, 1.0, 2.0}, {0.8, 2.0, 2.0},
                                           {1.2, 3.0, 2.0}};
    const auto t = crossover_point(rows);
    REQUIRE(t.has_value());
    CHECK(*t == 0.8);
  }
}

TEST_CASE("extinction curve handles degenerate thresholds") {
  // psi below the threshold: extinct at t = 0 with zero mean time.
  const auto model = StochasticModel::model2(paper_params(1.0 / 3.0, 0.2));
  SolverConfig cfg = quick_config(1.0, 0.2, Scheme::EulerMaruyama);
  const auto psi = default_history();  // y(0) = 1
  const ExtinctionCurve curve =
      extinction_curve(model, {0.2}, cfg, 5, /*threshold=*/2.0, 11, psi);
  REQUIRE(curve.rows.size() == 1);
  CHECK(curve.rows[0].fraction_extinct == 1.0);
  CHECK(curve.rows[0].mean_ext_time == 0.0);
  CHECK(curve.rows[0].std_ext_time == 0.0);
}

TEST_CASE("tau grids must increase strictly") {
  const auto model = StochasticModel::model1(paper_params(1.0 / 3.0, 0.5, 0.1));
  SolverConfig cfg = quick_config(1.0, 0.5, Scheme::EulerMaruyama);
  CHECK_THROWS_AS(
      extinction_curve(model, {0.5, 0.5}, cfg, 2, 1e-3, 1, default_history()),
      ValidationError);
  CHECK_THROWS_AS(
      find_crossover(model, {}, cfg, 2, 1, default_history()),
      ValidationError);
}

TEST_CASE("diverging runs raise an ensemble error naming the run indices") {
  // An absurd noise intensity overflows the Milstein correction to +inf on
  // any first step whose squared increment exceeds dt.
  ModelParams p = paper_params(0.01, 0.0);
  p.nu1 = 1e160;
  p.nu2 = 1e160;
  const auto model = StochasticModel::model1(p);
  SolverConfig cfg = quick_config(1.0, 0.0, Scheme::Milstein);
  try {
    run_ensemble(model, default_history(), cfg, 8, 12345);
    FAIL("expected EnsembleError");
  } catch (const EnsembleError& e) {
    CHECK_FALSE(e.run_indices().empty());
    for (int i : e.run_indices()) {
      CHECK(i >= 0);
      CHECK(i < 8);
    }
  }
  CHECK_THROWS_AS(
      run_ensemble(model, default_history(), cfg, 0, 1), ValidationError);
}

TEST_CASE("bifurcation amplitude grows monotonically past the onset") {
  ModelParams p = paper_params(0.01, 0.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 3000.0;
  const std::vector<double> grid{0.52, 0.54, 0.56, 0.58, 0.6};
  const BifurcationDiagram d =
      bifurcation_scan(p, grid, cfg, default_history());
  double max_amp = 0.0;
  for (const auto& row : d.rows) {
    max_amp = std::max(max_amp, row.x_max - row.x_min);
  }
  REQUIRE(d.tau_star.has_value());  // every grid point oscillates
  double prev = 0.0;
  for (const auto& row : d.rows) {
    const double amp = row.x_max - row.x_min;
    CHECK(amp >= prev - 0.05 * max_amp);
    CHECK(row.x_min <= row.x_max);
    CHECK(row.y_min <= row.y_max);
    prev = amp;
  }
}

TEST_CASE("long-term average of the noise-free model matches equilibria") {
  const ModelParams p = paper_params(0.01, 0.2, 0.0);
  const auto model = StochasticModel::model1(p);
  SolverConfig cfg = quick_config(2000.0, 0.2, Scheme::EulerMaruyama);
  const auto [mx, my] =
      long_term_average(model, 0.2, cfg, 1, 0.5, 3, default_history());
  CHECK(mx == doctest::Approx(0.6036).epsilon(1e-2 / 0.6036));
  CHECK(my == doctest::Approx(1.4153).epsilon(1e-2 / 1.4153));
}
