#include "delaydyn/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace delaydyn {

namespace {

void require(bool ok, const char* field, double value, const char* rule) {
  if (!ok) {
    std::ostringstream os;
    os << field << ": must be " << rule << " (got " << value << ")";
    throw ValidationError(os.str());
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << name << ": non-finite input (" << v << ")";
    throw ValidationError(os.str());
  }
}

// Michaelis-Menten predation rate beta*x*y_d / (1 + sigma*x).
double predation(const ModelParams& p, double x, double y_delayed) {
  return p.beta * x * y_delayed / (1.0 + p.sigma * x);
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(r) && r > 0.0, "r", r, "> 0");
  require(std::isfinite(K) && K > 0.0, "K", K, "> 0");
  require(std::isfinite(beta) && beta > 0.0, "beta", beta, "> 0");
  require(std::isfinite(sigma) && sigma >= 0.0, "sigma", sigma, ">= 0");
  require(std::isfinite(a) && a > 0.0, "a", a, "> 0");
  require(std::isfinite(tau) && tau >= 0.0, "tau", tau, ">= 0");
  require(std::isfinite(nu1) && nu1 >= 0.0, "nu1", nu1, ">= 0");
  require(std::isfinite(nu2) && nu2 >= 0.0, "nu2", nu2, ">= 0");
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::NoInterior: return "NoInterior";
    case Regime::StableInterior: return "StableInterior";
    case Regime::DelayDependent: return "DelayDependent";
  }
  return "unknown";
}

Rates drift(const ModelParams& p, const State& s, double y_delayed) {
  require_finite(s.x, "x");
  require_finite(s.y, "y");
  require_finite(y_delayed, "y_delayed");
  const double pred = predation(p, s.x, y_delayed);
  return {p.r * s.x * (1.0 - s.x / p.K) - pred, pred - p.a * s.y};
}

DiffusionPair diffusion_model1(const ModelParams& p, const State& s) {
  require_finite(s.x, "x");
  require_finite(s.y, "y");
  return {p.nu1 * s.x, p.nu2 * s.y};
}

DiffusionPair diffusion_model2(const ModelParams& p, const State& s,
                               double y_delayed) {
  require_finite(s.x, "x");
  require_finite(s.y, "y");
  require_finite(y_delayed, "y_delayed");
  const double pred = predation(p, s.x, y_delayed);
  const double birth = p.r * s.x * (1.0 - s.x / p.K);
  const double q1 = birth + pred;
  const double q2 = pred + p.a * s.y;
  return {q1 > 0.0 ? std::sqrt(q1) : 0.0, q2 > 0.0 ? std::sqrt(q2) : 0.0};
}

TransitionTable transition_table(const ModelParams& p, const State& s,
                                 double y_delayed, double dt) {
  require_finite(s.x, "x");
  require_finite(s.y, "y");
  require_finite(y_delayed, "y_delayed");
  require(std::isfinite(dt) && dt > 0.0, "dt", dt, "> 0");
  const double pred = predation(p, s.x, y_delayed);
  const double birth = p.r * s.x * (1.0 - s.x / p.K);
  TransitionTable t;
  t.p[0] = birth > 0.0 ? birth * dt : 0.0;
  t.p[1] = pred * dt;
  t.p[2] = pred * dt;
  t.p[3] = p.a * s.y * dt;
  for (int j = 0; j < 4; ++j) {
    if (t.p[j] > 1.0) {
      std::ostringstream os;
      os << "step size too large: p" << (j + 1) << " = " << t.p[j]
         << " exceeds 1 (dt = " << dt << ")";
      throw StepSizeError(os.str());
    }
  }
  return t;
}

EquilibriumSet compute_equilibria(const ModelParams& p) {
  p.validate();
  EquilibriumSet eq;
  eq.eps0 = {0.0, 0.0};
  eq.eps1 = {p.K, 0.0};
  const double denom = p.beta - p.sigma * p.a;
  if (denom <= 0.0) {
    eq.r0 = std::numeric_limits<double>::quiet_NaN();
    eq.rc = std::numeric_limits<double>::quiet_NaN();
    eq.regime = Regime::NoInterior;
    return eq;
  }
  const double x_star = p.a / denom;
  eq.r0 = p.K / x_star;
  eq.rc = 2.0 + 1.0 / (1.0 + 2.0 * p.sigma * x_star);
  if (eq.r0 > 1.0) {
    // y* > 0 exactly when R0 > 1.
    const double y_star = p.r * x_star * x_star * (eq.r0 - 1.0) / (p.K * p.a);
    eq.eps_plus = State{x_star, y_star};
    eq.regime = eq.r0 <= eq.rc ? Regime::StableInterior : Regime::DelayDependent;
  } else {
    eq.regime = Regime::NoInterior;
  }
  return eq;
}

}  // namespace delaydyn
