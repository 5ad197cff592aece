#pragma once

#include "delaydyn/history.hpp"
#include "delaydyn/rng.hpp"
#include "delaydyn/solver.hpp"

namespace delaydyn {

enum class StochasticModelKind {
  Model1,  // white noise proportional to the state
  Model2,  // demographic noise, sqrt of summed event rates
};

/// One of the two stochastic predator-prey models: shared drift, per-model
/// diagonal diffusion, and the analytic diffusion derivatives used by the
/// Milstein correction.
struct StochasticModel {
  StochasticModelKind kind{StochasticModelKind::Model1};
  ModelParams params;

  static StochasticModel model1(const ModelParams& params);
  static StochasticModel model2(const ModelParams& params);

  DiffusionPair diffusion(const State& s, double y_delayed) const;

  /// Partial derivatives (dg1/dx, dg2/dy) with respect to the current state
  /// only; the delayed argument is held fixed.
  DiffusionPair diffusion_state_derivative(const State& s,
                                           double y_delayed) const;
};

/// Milstein correction term 0.5 * g_i * (dg_i/dz_i) * (dW_i^2 - dt) per
/// component, with the diffusion derivative taken with respect to the
/// current state only. For Model 1 this reduces to
/// 0.5 * nu_i^2 * z_i * (dW_i^2 - dt).
Rates milstein_correction(const StochasticModel& model, const State& s,
                          double y_delayed, double dw1, double dw2, double dt);

/// Fixed-step Euler-Maruyama or Milstein integration of an SDDE with one
/// discrete delay and diagonal noise. The delayed y is read at exactly
/// t - tau, an on-grid node. States are clamped at 0 componentwise after
/// each step, and 0 is absorbing per component (an extinct population stays
/// extinct).
///
/// cfg.scheme must be EulerMaruyama or Milstein. The Milstein correction
/// ignores the delayed-argument diffusion dependence, so for Model 2 it
/// carries no order guarantee (Euler-Maruyama is the conventional choice
/// there).
Trajectory integrate_sdde(const StochasticModel& model,
                          const HistoryFunction& psi, const SolverConfig& cfg,
                          RngStream& stream);

/// Same scheme driven by precomputed increments (n_steps x 2), for coupled
/// path-refinement studies. increments.n_steps must cover cfg's step count.
Trajectory integrate_sdde(const StochasticModel& model,
                          const HistoryFunction& psi, const SolverConfig& cfg,
                          const WienerIncrements& increments);

}  // namespace delaydyn
