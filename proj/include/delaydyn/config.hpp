#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "delaydyn/model.hpp"
#include "delaydyn/solver.hpp"

namespace delaydyn {

/// Everything a CLI run needs. Defaults follow the toolkit conventions:
/// constant history at (3, 1), dt = 0.01, 200 runs, extinction threshold
/// 1e-3, transient fraction 0.5.
struct RunConfig {
  std::string model{"deterministic"};  // deterministic | model1 | model2
  ModelParams params{0.8, 5.0, 0.5, 0.01, 0.3, 0.2, 0.1, 0.1};
  double x0{3.0};
  double y0{1.0};
  double dt{0.01};
  double t_end{1500.0};
  std::string scheme{"default"};  // rk4 | euler-maruyama | milstein | default
  int n_runs{200};
  std::uint64_t base_seed{42};
  std::string tau_grid_spec;  // "start:step:stop" or "v1,v2,..."
  double threshold{1e-3};
  double transient_fraction{0.5};
  std::string output{"out.csv"};
  int threads{-1};  // -1: DELAYDYN_THREADS env or auto; 0: auto
};

/// Parses "start:step:stop" (inclusive stop, within rounding) or a
/// comma-separated list. Throws ValidationError naming tau-grid.
std::vector<double> parse_tau_grid(const std::string& spec);

/// Loads a flat JSON object whose keys match the long flag names
/// (e.g. {"r": 0.8, "t-end": 100}). Unknown keys and type mismatches are
/// validation errors naming the key. Values overwrite `cfg` in place.
void apply_json_config(const std::string& path, RunConfig& cfg);

/// Full cross-field validation; throws ValidationError naming the first
/// offending key.
void validate_run_config(const RunConfig& cfg);

/// Scheme actually used for a model: explicit choice, or the per-model
/// default (rk4 / milstein / euler-maruyama). Throws for inconsistent
/// combinations.
Scheme resolve_scheme(const RunConfig& cfg);

/// Thread cap: the --threads flag when set (>= 0), else DELAYDYN_THREADS,
/// else 0 (auto). Throws ValidationError for a malformed env value.
int resolve_threads_from_env(const RunConfig& cfg);

}  // namespace delaydyn
