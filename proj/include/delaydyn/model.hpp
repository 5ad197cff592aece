#pragma once

#include <array>
#include <optional>
#include <string>

#include "delaydyn/errors.hpp"

namespace delaydyn {

/// A prey/predator density pair.
struct State {
  double x{0.0};
  double y{0.0};
};

/// A pair of rates of change (dx/dt, dy/dt). Signed, unlike State.
struct Rates {
  double dx{0.0};
  double dy{0.0};
};

/// Diagonal diffusion coefficients of the two noise channels.
/// Off-diagonal terms are identically zero for both stochastic models.
struct DiffusionPair {
  double g1{0.0};
  double g2{0.0};
};

/// Biological and noise parameters of the delayed predator-prey system.
///
///   x' = r x (1 - x/K) - beta x y(t-tau) / (1 + sigma x)
///   y' = beta x y(t-tau) / (1 + sigma x) - a y
///
/// nu1/nu2 are the white-noise intensities used by the proportional-noise
/// stochastic model only.
struct ModelParams {
  double r{0.8};      // prey specific growth rate (1/time)
  double K{5.0};      // carrying capacity (density)
  double beta{0.5};   // feeding rate (1/(density*time))
  double sigma{0.01}; // capture-rate effect constant (1/density)
  double a{0.3};      // predator death rate (1/time)
  double tau{0.0};    // time delay (time)
  double nu1{0.0};    // prey noise intensity (1/sqrt(time))
  double nu2{0.0};    // predator noise intensity (1/sqrt(time))

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Stability classification of the interior equilibrium.
enum class Regime {
  NoInterior,      // no positive interior equilibrium
  StableInterior,  // 1 < R0 <= Rc: stable for every delay
  DelayDependent,  // 1 < Rc < R0: stable only below some critical delay
};

std::string to_string(Regime regime);

/// Fixed points of the deterministic system plus the stability thresholds.
/// eps_plus is present iff beta > sigma*a and R0 > 1; r0/rc are NaN when
/// the interior x* is not defined (beta <= sigma*a).
struct EquilibriumSet {
  State eps0{0.0, 0.0};
  State eps1{0.0, 0.0};
  std::optional<State> eps_plus;
  double r0{0.0};
  double rc{0.0};
  Regime regime{Regime::NoInterior};
};

/// One-step change vectors and probabilities of the birth/death description
/// underlying the demographic-noise model. dz rows are fixed as
/// (1,0), (-1,0), (0,1), (0,-1).
struct TransitionTable {
  std::array<double, 4> p{};
  static constexpr std::array<std::array<int, 2>, 4> dz{
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
};

/// Deterministic drift field. `y_delayed` is the predator density at t-tau.
/// Inputs must be finite; throws ValidationError otherwise.
Rates drift(const ModelParams& p, const State& s, double y_delayed);

/// Proportional (environmental) noise: (nu1*x, nu2*y).
DiffusionPair diffusion_model1(const ModelParams& p, const State& s);

/// Demographic noise: square roots of the summed event rates per component.
/// Negative radicands (possible for x > K) are clamped to 0 before the root.
DiffusionPair diffusion_model2(const ModelParams& p, const State& s,
                               double y_delayed);

/// Event probabilities over a step of length dt. p1 is clamped to 0 when the
/// logistic rate is negative (x > K). Throws StepSizeError if any p exceeds 1.
TransitionTable transition_table(const ModelParams& p, const State& s,
                                 double y_delayed, double dt);

/// Fixed points, R0 = K/x*, Rc = 2 + 1/(1+2*sigma*x*), and the regime label.
EquilibriumSet compute_equilibria(const ModelParams& p);

}  // namespace delaydyn
