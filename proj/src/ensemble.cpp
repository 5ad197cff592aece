#include "delaydyn/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "delaydyn/dde.hpp"
#include "delaydyn/errors.hpp"

namespace delaydyn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_tau_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw ValidationError("tau_grid: must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw ValidationError("tau_grid: entries must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ValidationError("tau_grid: must be strictly increasing");
    }
  }
}

// Runs make(i) for i in [0, n) on n_threads workers and hands the results to
// consume(i, ...) on the calling thread in strictly increasing i. The
// consumption order (and therefore every floating-point reduction built on
// it) is independent of the thread count. Worker exceptions abort the pool
// and rethrow on the caller.
template <typename Result, typename MakeFn, typename ConsumeFn>
void ordered_parallel_map(int n, int n_threads, MakeFn&& make,
                          ConsumeFn&& consume) {
  n_threads = std::min(resolve_thread_count(n_threads), std::max(n, 1));
  if (n_threads <= 1) {
    for (int i = 0; i < n; ++i) consume(i, make(i));
    return;
  }

  std::mutex mu;
  std::condition_variable cv_ready;
  std::condition_variable cv_space;
  std::map<int, Result> ready;
  int next_to_consume = 0;
  int next_to_make = 0;
  bool abort = false;
  std::exception_ptr error;
  const int max_inflight = 2 * n_threads + 2;

  auto worker = [&]() {
    for (;;) {
      int i;
      {
        std::unique_lock<std::mutex> lock(mu);
        if (abort || next_to_make >= n) return;
        i = next_to_make++;
        cv_space.wait(lock, [&] {
          return abort || i < next_to_consume + max_inflight;
        });
        if (abort) return;
      }
      try {
        Result r = make(i);
        std::lock_guard<std::mutex> lock(mu);
        ready.emplace(i, std::move(r));
        cv_ready.notify_all();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        abort = true;
        cv_ready.notify_all();
        cv_space.notify_all();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);

  {
    std::unique_lock<std::mutex> lock(mu);
    while (next_to_consume < n && !abort) {
      cv_ready.wait(lock, [&] {
        return abort || ready.count(next_to_consume) > 0;
      });
      if (abort) break;
      Result r = std::move(ready.at(next_to_consume));
      ready.erase(next_to_consume);
      const int i = next_to_consume;
      lock.unlock();
      consume(i, std::move(r));
      lock.lock();
      ++next_to_consume;
      cv_space.notify_all();
    }
    abort = abort || next_to_consume >= n;
    cv_space.notify_all();
    cv_ready.notify_all();
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct RunOutcome {
  std::optional<Trajectory> traj;
  double divergence_time{0.0};
};

[[noreturn]] void throw_ensemble_error(const std::vector<int>& diverged) {
  std::ostringstream os;
  os << "ensemble runs diverged:";
  for (int i : diverged) os << ' ' << i;
  throw EnsembleError(os.str(), diverged);
}

}  // namespace

HistoryFunction default_history() {
  return HistoryFunction::constant({3.0, 1.0});
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

EnsembleResult run_ensemble(const StochasticModel& model,
                            const HistoryFunction& psi,
                            const SolverConfig& cfg, int n_runs,
                            std::uint64_t base_seed,
                            double extinction_threshold, int n_threads) {
  if (n_runs < 1) throw ValidationError("n_runs: must be >= 1");
  if (!(extinction_threshold >= 0.0)) {
    throw ValidationError("threshold: must be >= 0");
  }
  const SolverConfig c = cfg.snapped();  // validate once up front

  EnsembleResult result;
  result.n_runs = n_runs;
  result.base_seed = base_seed;
  result.extinction_times.resize(static_cast<std::size_t>(n_runs));
  result.final_states.resize(static_cast<std::size_t>(n_runs));

  const std::size_t n_nodes = static_cast<std::size_t>(c.n_steps()) + 1;
  result.mean_trajectory.t0 = 0.0;
  result.mean_trajectory.dt = c.dt;
  result.mean_trajectory.states.assign(n_nodes, State{});
  result.mean_trajectory.drifts.assign(n_nodes, Rates{});

  std::vector<int> diverged;
  ordered_parallel_map<RunOutcome>(
      n_runs, n_threads,
      [&](int i) -> RunOutcome {
        RngStream stream(base_seed, static_cast<std::uint64_t>(i));
        try {
          return {integrate_sdde(model, psi, c, stream), 0.0};
        } catch (const DivergenceError& e) {
          return {std::nullopt, e.time()};
        }
      },
      [&](int i, RunOutcome&& out) {
        if (!out.traj) {
          diverged.push_back(i);
          return;
        }
        const Trajectory& t = *out.traj;
        auto& mean = result.mean_trajectory;
        for (std::size_t j = 0; j < n_nodes; ++j) {
          mean.states[j].x += t.states[j].x;
          mean.states[j].y += t.states[j].y;
          mean.drifts[j].dx += t.drifts[j].dx;
          mean.drifts[j].dy += t.drifts[j].dy;
        }
        const auto idx = static_cast<std::size_t>(i);
        result.extinction_times[idx] = extinction_time(t, extinction_threshold);
        result.final_states[idx] = t.states.back();
      });
  if (!diverged.empty()) throw_ensemble_error(diverged);

  const double inv = 1.0 / static_cast<double>(n_runs);
  for (std::size_t j = 0; j < n_nodes; ++j) {
    result.mean_trajectory.states[j].x *= inv;
    result.mean_trajectory.states[j].y *= inv;
    result.mean_trajectory.drifts[j].dx *= inv;
    result.mean_trajectory.drifts[j].dy *= inv;
  }
  return result;
}

std::optional<double> extinction_time(const Trajectory& traj,
                                      double threshold) {
  if (!(threshold >= 0.0)) throw ValidationError("threshold: must be >= 0");
  for (std::size_t i = 0; i < traj.n_nodes(); ++i) {
    if (traj.states[i].y <= threshold) return traj.time_at(i);
  }
  return std::nullopt;
}

std::size_t post_transient_start(std::size_t n_nodes,
                                 double transient_fraction) {
  if (!(transient_fraction >= 0.0) || transient_fraction >= 1.0 ||
      !std::isfinite(transient_fraction)) {
    throw ValidationError("transient_fraction: must lie in [0, 1)");
  }
  const auto start = static_cast<std::size_t>(
      std::ceil(transient_fraction * static_cast<double>(n_nodes)));
  if (start >= n_nodes) {
    std::ostringstream os;
    os << "post-transient window is empty (" << n_nodes << " nodes, fraction "
       << transient_fraction << ")";
    throw EmptyWindowError(os.str());
  }
  return start;
}

Extrema post_transient_extrema(const Trajectory& traj,
                               double transient_fraction) {
  const std::size_t start = post_transient_start(traj.n_nodes(),
                                                 transient_fraction);
  Extrema e{traj.states[start].x, traj.states[start].x,
            traj.states[start].y, traj.states[start].y};
  for (std::size_t i = start + 1; i < traj.n_nodes(); ++i) {
    e.x_min = std::min(e.x_min, traj.states[i].x);
    e.x_max = std::max(e.x_max, traj.states[i].x);
    e.y_min = std::min(e.y_min, traj.states[i].y);
    e.y_max = std::max(e.y_max, traj.states[i].y);
  }
  return e;
}

namespace {

// Post-transient x amplitude of one deterministic integration.
double dde_amplitude(const ModelParams& params, double tau,
                     const SolverConfig& cfg, const HistoryFunction& psi,
                     double transient_fraction, Extrema* extrema_out) {
  ModelParams p = params;
  p.tau = tau;
  SolverConfig c = cfg;
  c.tau = tau;
  c.scheme = Scheme::RK4;
  const Trajectory traj = integrate_dde(predator_prey_field(p), psi, c);
  const Extrema e = post_transient_extrema(traj, transient_fraction);
  if (extrema_out) *extrema_out = e;
  return e.x_max - e.x_min;
}

}  // namespace

BifurcationDiagram bifurcation_scan(const ModelParams& params,
                                    const std::vector<double>& tau_grid,
                                    const SolverConfig& cfg,
                                    const HistoryFunction& psi,
                                    const ScanOptions& opts) {
  params.validate();
  validate_tau_grid(tau_grid);

  BifurcationDiagram diagram;
  diagram.rows.resize(tau_grid.size());
  ordered_parallel_map<BifurcationDiagram::Row>(
      static_cast<int>(tau_grid.size()), opts.n_threads,
      [&](int i) -> BifurcationDiagram::Row {
        Extrema e{};
        dde_amplitude(params, tau_grid[static_cast<std::size_t>(i)], cfg, psi,
                      opts.transient_fraction, &e);
        return {tau_grid[static_cast<std::size_t>(i)], e.x_min, e.x_max,
                e.y_min, e.y_max};
      },
      [&](int i, BifurcationDiagram::Row&& row) {
        diagram.rows[static_cast<std::size_t>(i)] = row;
      });

  // Onset of oscillation: first grid point whose amplitude exceeds the
  // threshold, refined by bisection against its quiet left neighbour.
  std::size_t first_above = diagram.rows.size();
  for (std::size_t i = 0; i < diagram.rows.size(); ++i) {
    if (diagram.rows[i].x_max - diagram.rows[i].x_min > opts.amp_threshold) {
      first_above = i;
      break;
    }
  }
  if (first_above == diagram.rows.size()) {
    return diagram;  // no oscillation on the grid
  }
  if (first_above == 0) {
    diagram.tau_star = diagram.rows.front().tau;  // no left bracket to refine
    return diagram;
  }
  double lo = diagram.rows[first_above - 1].tau;
  double hi = diagram.rows[first_above].tau;
  while (hi - lo > opts.refine_width) {
    const double mid = 0.5 * (lo + hi);
    const double amp =
        dde_amplitude(params, mid, cfg, psi, opts.transient_fraction, nullptr);
    (amp > opts.amp_threshold ? hi : lo) = mid;
  }
  diagram.tau_star = 0.5 * (lo + hi);
  return diagram;
}

std::pair<double, double> long_term_average(const StochasticModel& model,
                                            double tau,
                                            const SolverConfig& cfg,
                                            int n_runs,
                                            double transient_fraction,
                                            std::uint64_t base_seed,
                                            const HistoryFunction& psi,
                                            int n_threads) {
  if (n_runs < 1) throw ValidationError("n_runs: must be >= 1");
  StochasticModel m = model;
  m.params.tau = tau;
  SolverConfig c = cfg;
  c.tau = tau;
  c = c.snapped();
  const std::size_t n_nodes = static_cast<std::size_t>(c.n_steps()) + 1;
  const std::size_t start = post_transient_start(n_nodes, transient_fraction);
  const double window = static_cast<double>(n_nodes - start);

  struct WindowMean {
    std::optional<std::pair<double, double>> value;
    double divergence_time{0.0};
  };

  double sum_x = 0.0;
  double sum_y = 0.0;
  std::vector<int> diverged;
  ordered_parallel_map<WindowMean>(
      n_runs, n_threads,
      [&](int i) -> WindowMean {
        RngStream stream(base_seed, static_cast<std::uint64_t>(i));
        try {
          const Trajectory t = integrate_sdde(m, psi, c, stream);
          double sx = 0.0, sy = 0.0;
          for (std::size_t j = start; j < n_nodes; ++j) {
            sx += t.states[j].x;
            sy += t.states[j].y;
          }
          return {std::pair{sx / window, sy / window}, 0.0};
        } catch (const DivergenceError& e) {
          return {std::nullopt, e.time()};
        }
      },
      [&](int i, WindowMean&& wm) {
        if (!wm.value) {
          diverged.push_back(i);
          return;
        }
        sum_x += wm.value->first;
        sum_y += wm.value->second;
      });
  if (!diverged.empty()) throw_ensemble_error(diverged);
  return {sum_x / n_runs, sum_y / n_runs};
}

std::optional<double> crossover_point(
    const std::vector<CrossoverResult::Row>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = rows[i].mean_x - rows[i].mean_y;
    if (d == 0.0) return rows[i].tau;
    if (i + 1 < rows.size()) {
      const double d_next = rows[i + 1].mean_x - rows[i + 1].mean_y;
      if (d * d_next < 0.0) {
        return rows[i].tau +
               (0.0 - d) * (rows[i + 1].tau - rows[i].tau) / (d_next - d);
      }
    }
  }
  return std::nullopt;
}

CrossoverResult find_crossover(const StochasticModel& model,
                               const std::vector<double>& tau_grid,
                               const SolverConfig& cfg, int n_runs,
                               std::uint64_t base_seed,
                               const HistoryFunction& psi,
                               double transient_fraction, int n_threads) {
  validate_tau_grid(tau_grid);
  CrossoverResult result;
  result.rows.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    const auto [mx, my] = long_term_average(model, tau, cfg, n_runs,
                                            transient_fraction, base_seed,
                                            psi, n_threads);
    result.rows.push_back({tau, mx, my});
  }
  result.tau_star_star = crossover_point(result.rows);
  return result;
}

ExtinctionCurve extinction_curve(const StochasticModel& model,
                                 const std::vector<double>& tau_grid,
                                 const SolverConfig& cfg, int n_runs,
                                 double threshold, std::uint64_t base_seed,
                                 const HistoryFunction& psi, int n_threads) {
  validate_tau_grid(tau_grid);
  if (n_runs < 1) throw ValidationError("n_runs: must be >= 1");
  if (!(threshold >= 0.0)) throw ValidationError("threshold: must be >= 0");

  ExtinctionCurve curve;
  curve.rows.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    StochasticModel m = model;
    m.params.tau = tau;
    SolverConfig c = cfg;
    c.tau = tau;
    c = c.snapped();

    struct RunExt {
      std::optional<std::optional<double>> ext;  // outer: run ok?
    };
    std::vector<double> times;
    std::vector<int> diverged;
    ordered_parallel_map<RunExt>(
        n_runs, n_threads,
        [&](int i) -> RunExt {
          RngStream stream(base_seed, static_cast<std::uint64_t>(i));
          try {
            const Trajectory t = integrate_sdde(m, psi, c, stream);
            return {extinction_time(t, threshold)};
          } catch (const DivergenceError&) {
            return {std::nullopt};
          }
        },
        [&](int i, RunExt&& r) {
          if (!r.ext) {
            diverged.push_back(i);
          } else if (*r.ext) {
            times.push_back(**r.ext);
          }
        });
    if (!diverged.empty()) throw_ensemble_error(diverged);

    ExtinctionCurve::Row row{tau, kNaN, kNaN,
                             static_cast<double>(times.size()) / n_runs};
    if (!times.empty()) {
      double sum = 0.0;
      for (double t : times) sum += t;
      row.mean_ext_time = sum / static_cast<double>(times.size());
      if (times.size() > 1) {
        double ss = 0.0;
        for (double t : times) {
          const double d = t - row.mean_ext_time;
          ss += d * d;
        }
        row.std_ext_time =
            std::sqrt(ss / static_cast<double>(times.size() - 1));
      } else {
        row.std_ext_time = 0.0;
      }
    }
    curve.rows.push_back(row);
  }
  return curve;
}

}  // namespace delaydyn
