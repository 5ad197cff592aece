#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "delaydyn/sdde.hpp"

namespace delaydyn {

/// Constant history at the conventional initial data x(0)=3, y(0)=1.
HistoryFunction default_history();

/// Threads to use: 0 picks hardware concurrency, otherwise the request.
/// Always at least 1.
int resolve_thread_count(int requested);

/// Monte Carlo summary of n_runs stochastic trajectories. Run i always uses
/// the random stream (base_seed, i), so results are bit-identical no matter
/// how runs are scheduled across threads.
struct EnsembleResult {
  Trajectory mean_trajectory;
  std::vector<std::optional<double>> extinction_times;  // predator, per run
  std::vector<State> final_states;
  int n_runs{0};
  std::uint64_t base_seed{0};
};

/// Rows of post-transient extrema per delay plus the detected Hopf point.
struct BifurcationDiagram {
  struct Row {
    double tau;
    double x_min, x_max;
    double y_min, y_max;
  };
  std::vector<Row> rows;
  std::optional<double> tau_star;
};

/// Long-term averages per delay plus the delay where prey and predator
/// means cross.
struct CrossoverResult {
  struct Row {
    double tau;
    double mean_x, mean_y;
  };
  std::vector<Row> rows;
  std::optional<double> tau_star_star;
};

/// Predator extinction-time statistics per delay. mean/std are over the
/// extinct runs only and NaN when no run went extinct.
struct ExtinctionCurve {
  struct Row {
    double tau;
    double mean_ext_time;
    double std_ext_time;
    double fraction_extinct;
  };
  std::vector<Row> rows;
};

EnsembleResult run_ensemble(const StochasticModel& model,
                            const HistoryFunction& psi,
                            const SolverConfig& cfg, int n_runs,
                            std::uint64_t base_seed,
                            double extinction_threshold = 1e-3,
                            int n_threads = 0);

/// First node time with y <= threshold; absent if the predator never falls
/// to the threshold.
std::optional<double> extinction_time(const Trajectory& traj,
                                      double threshold);

struct Extrema {
  double x_min, x_max;
  double y_min, y_max;
};

/// Componentwise min/max over the post-transient window: the first
/// ceil(fraction * n_nodes) nodes are dropped. Throws EmptyWindowError when
/// nothing remains.
Extrema post_transient_extrema(const Trajectory& traj,
                               double transient_fraction);

/// Index of the first post-transient node (shared window rule).
std::size_t post_transient_start(std::size_t n_nodes,
                                 double transient_fraction);

struct ScanOptions {
  double transient_fraction{0.5};
  double amp_threshold{1e-2};  // x amplitude that counts as oscillation
  double refine_width{0.01};   // bisection stops at this bracket width
  int n_threads{0};
};

/// Deterministic sweep over tau: integrates the DDE per grid point and
/// reports post-transient extrema. tau_star is the onset of oscillation
/// (x amplitude above amp_threshold), refined by bisection between the
/// bracketing grid points.
BifurcationDiagram bifurcation_scan(const ModelParams& params,
                                    const std::vector<double>& tau_grid,
                                    const SolverConfig& cfg,
                                    const HistoryFunction& psi,
                                    const ScanOptions& opts = {});

/// Mean of x and y over both the ensemble and the post-transient window.
std::pair<double, double> long_term_average(const StochasticModel& model,
                                            double tau,
                                            const SolverConfig& cfg,
                                            int n_runs,
                                            double transient_fraction,
                                            std::uint64_t base_seed,
                                            const HistoryFunction& psi,
                                            int n_threads = 0);

/// Long-term averages over the tau grid; tau_star_star interpolates the
/// sign change of mean_x - mean_y linearly between adjacent grid points.
CrossoverResult find_crossover(const StochasticModel& model,
                               const std::vector<double>& tau_grid,
                               const SolverConfig& cfg, int n_runs,
                               std::uint64_t base_seed,
                               const HistoryFunction& psi,
                               double transient_fraction = 0.5,
                               int n_threads = 0);

/// The interpolation rule of find_crossover, exposed for direct use on
/// precomputed rows.
std::optional<double> crossover_point(
    const std::vector<CrossoverResult::Row>& rows);

/// Extinction-time statistics per tau grid point.
ExtinctionCurve extinction_curve(const StochasticModel& model,
                                 const std::vector<double>& tau_grid,
                                 const SolverConfig& cfg, int n_runs,
                                 double threshold, std::uint64_t base_seed,
                                 const HistoryFunction& psi,
                                 int n_threads = 0);

}  // namespace delaydyn
