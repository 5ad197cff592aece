#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <vector>

#include "delaydyn/model.hpp"

namespace delaydyn {

/// Initial data psi(t) on [-tau, 0]. Two built-ins: a constant function and
/// tabulated values with linear interpolation between samples.
class HistoryFunction {
 public:
  /// psi(t) == s0 everywhere.
  static HistoryFunction constant(State s0);

  /// Piecewise-linear through (times[i], values[i]); times must be strictly
  /// increasing and reach t = 0. Queries outside [times.front(),
  /// times.back()] throw ValidationError.
  static HistoryFunction tabulated(std::vector<double> times,
                                   std::vector<State> values);

  State eval(double t) const;

  /// Earliest time at which the function is defined (-inf for constant).
  double min_time() const { return min_time_; }

 private:
  HistoryFunction() = default;
  bool is_constant_{true};
  State constant_value_{};
  std::vector<double> times_;
  std::vector<State> values_;
  double min_time_{0.0};
};

/// Sliding window of (t, state, drift) samples on the uniform grid t = i*dt,
/// holding at least [t_now - tau, t_now] plus the psi samples on [-tau, 0].
///
/// Interpolation between nodes follows the dense-output rules of the
/// integrators: cubic Hermite (stored drifts as slopes) on segments at
/// t >= 0, linear on segments touching the psi region. With
/// clamp_nonnegative, interpolated values are floored at 0 componentwise.
///
/// Single-owner mutable structure; one buffer per integration.
class HistoryBuffer {
 public:
  /// Pre-fills nodes -m..0 from psi, where m = tau/dt (must be integral;
  /// pass the snapped dt from SolverConfig). tau = 0 keeps only t = 0.
  HistoryBuffer(const HistoryFunction& psi, double tau, double dt,
                bool clamp_nonnegative = true);

  double dt() const { return dt_; }
  double tau() const { return tau_; }
  long delay_steps() const { return m_; }
  double top_time() const { return static_cast<double>(top_index_) * dt_; }
  std::size_t size() const { return nodes_.size(); }

  /// Records the drift at the newest node (needed once, for the t = 0 node
  /// supplied by psi; later nodes carry their drift through push).
  void set_top_drift(Rates f);

  /// Appends the node at t = top_time() + dt; throws ValidationError when t
  /// is not contiguous. Samples older than t - tau - 2*dt are discarded.
  void push(double t, State s, Rates f);

  /// Value at time t within [top_time() - tau, top_time()]. Grid nodes are
  /// returned exactly; off-node queries interpolate. Throws OutOfWindowError
  /// outside the window.
  State eval(double t) const;

 private:
  struct Node {
    State s;
    Rates f;
    bool has_drift;
  };

  const Node& node(long index) const {
    return nodes_[static_cast<std::size_t>(index - base_index_)];
  }

  double dt_{0.0};
  double tau_{0.0};
  long m_{0};  // delay in steps; node times are index*dt
  long base_index_{0};
  long top_index_{0};
  bool clamp_{true};
  std::deque<Node> nodes_;
};

}  // namespace delaydyn
