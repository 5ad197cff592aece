#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "delaydyn/model.hpp"

namespace delaydyn {

enum class Scheme {
  RK4,            // deterministic method of steps
  EulerMaruyama,  // strong order 0.5
  Milstein,       // strong order 1 for state-only diagonal noise
};

std::string to_string(Scheme scheme);

/// Fixed-step solver configuration.
///
/// For tau > 0 the step must satisfy dt <= tau (each method-of-steps segment
/// only reads already-computed history) and is snapped to tau/m with
/// m = round(tau/dt), so the delay lands exactly on grid nodes. The snapped
/// dt is what trajectories and output metadata report.
struct SolverConfig {
  double dt{0.01};
  double t_end{1500.0};
  double tau{0.0};
  Scheme scheme{Scheme::RK4};
  /// Floor states at 0 componentwise (densities). Disable for generic
  /// signed test problems.
  bool clamp_nonnegative{true};

  /// Validates and returns a copy with dt snapped to divide tau.
  SolverConfig snapped() const;

  /// Number of steps of the (already snapped) configuration:
  /// floor(t_end/dt), so a trajectory has n_steps()+1 nodes.
  long n_steps() const;
};

/// Uniform-grid solution samples plus the drift at each node (slopes for
/// cubic Hermite dense output).
struct Trajectory {
  double t0{0.0};
  double dt{0.0};
  std::vector<State> states;
  std::vector<Rates> drifts;

  std::size_t n_nodes() const { return states.size(); }
  double time_at(std::size_t i) const {
    return t0 + static_cast<double>(i) * dt;
  }
  double t_last() const {
    return states.empty() ? t0 : time_at(states.size() - 1);
  }
};

}  // namespace delaydyn
