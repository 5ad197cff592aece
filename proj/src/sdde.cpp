#include "delaydyn/sdde.hpp"

#include <cmath>
#include <sstream>

#include "delaydyn/errors.hpp"

namespace delaydyn {

namespace {

bool finite(const State& s) {
  return std::isfinite(s.x) && std::isfinite(s.y);
}

[[noreturn]] void throw_divergence(double t) {
  std::ostringstream os;
  os << "trajectory diverged (non-finite state) at t = " << t;
  throw DivergenceError(os.str(), t);
}

}  // namespace

StochasticModel StochasticModel::model1(const ModelParams& params) {
  params.validate();
  return {StochasticModelKind::Model1, params};
}

StochasticModel StochasticModel::model2(const ModelParams& params) {
  params.validate();
  return {StochasticModelKind::Model2, params};
}

DiffusionPair StochasticModel::diffusion(const State& s,
                                         double y_delayed) const {
  return kind == StochasticModelKind::Model1
             ? diffusion_model1(params, s)
             : diffusion_model2(params, s, y_delayed);
}

DiffusionPair StochasticModel::diffusion_state_derivative(
    const State& s, double y_delayed) const {
  if (kind == StochasticModelKind::Model1) {
    return {params.nu1, params.nu2};
  }
  // g1 = sqrt(q1), q1 = r x (1 - x/K) + pred(x, y_d):
  //   dg1/dx = (dq1/dx) / (2 g1), zero where the radicand was clamped.
  // g2 = sqrt(q2), q2 = pred + a y: dq2/dy = a.
  const double one_plus = 1.0 + params.sigma * s.x;
  const double pred = params.beta * s.x * y_delayed / one_plus;
  const double q1 = params.r * s.x * (1.0 - s.x / params.K) + pred;
  const double q2 = pred + params.a * s.y;
  const double dq1_dx = params.r * (1.0 - 2.0 * s.x / params.K) +
                        params.beta * y_delayed / (one_plus * one_plus);
  DiffusionPair d;
  d.g1 = q1 > 0.0 ? dq1_dx / (2.0 * std::sqrt(q1)) : 0.0;
  d.g2 = q2 > 0.0 ? params.a / (2.0 * std::sqrt(q2)) : 0.0;
  return d;
}

Rates milstein_correction(const StochasticModel& model, const State& s,
                          double y_delayed, double dw1, double dw2,
                          double dt) {
  const DiffusionPair g = model.diffusion(s, y_delayed);
  const DiffusionPair dg = model.diffusion_state_derivative(s, y_delayed);
  return {0.5 * g.g1 * dg.g1 * (dw1 * dw1 - dt),
          0.5 * g.g2 * dg.g2 * (dw2 * dw2 - dt)};
}

namespace {

// Shared stepping core; `draw` yields (dW1, dW2) for step i in order.
template <typename DrawFn>
Trajectory integrate_sdde_impl(const StochasticModel& model,
                               const HistoryFunction& psi,
                               const SolverConfig& cfg, DrawFn&& draw) {
  if (cfg.scheme != Scheme::EulerMaruyama && cfg.scheme != Scheme::Milstein) {
    throw ValidationError(
        "scheme: stochastic integration requires euler-maruyama or milstein");
  }
  const SolverConfig c = cfg.snapped();
  const double dt = c.dt;
  const long n = c.n_steps();
  const long m = c.tau > 0.0 ? std::lround(c.tau / dt) : 0;
  const bool use_milstein = c.scheme == Scheme::Milstein;
  const ModelParams& p = model.params;

  HistoryBuffer buf(psi, c.tau, dt, c.clamp_nonnegative);

  Trajectory traj;
  traj.t0 = 0.0;
  traj.dt = dt;
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.drifts.reserve(static_cast<std::size_t>(n) + 1);

  State s = psi.eval(0.0);
  if (c.clamp_nonnegative) {
    s = {s.x < 0.0 ? 0.0 : s.x, s.y < 0.0 ? 0.0 : s.y};
  }
  if (!finite(s)) throw_divergence(0.0);

  // Zero is absorbing per component: extinction is permanent.
  bool absorbed_x = s.x <= 0.0;
  bool absorbed_y = s.y <= 0.0;

  double y_del = m == 0 ? s.y : buf.eval(-c.tau).y;
  Rates f = drift(p, s, y_del);
  buf.set_top_drift(f);
  traj.states.push_back(s);
  traj.drifts.push_back(f);

  for (long i = 0; i < n; ++i) {
    const double t1 = static_cast<double>(i + 1) * dt;
    const DiffusionPair g = model.diffusion(s, y_del);
    const auto [dw1, dw2] = draw(i);

    State next{s.x + f.dx * dt + g.g1 * dw1, s.y + f.dy * dt + g.g2 * dw2};
    if (use_milstein) {
      const Rates corr = milstein_correction(model, s, y_del, dw1, dw2, dt);
      next.x += corr.dx;
      next.y += corr.dy;
    }
    if (absorbed_x || next.x <= 0.0) {
      next.x = 0.0;
      absorbed_x = true;
    }
    if (absorbed_y || next.y <= 0.0) {
      next.y = 0.0;
      absorbed_y = true;
    }
    if (!finite(next)) throw_divergence(t1);

    s = next;
    y_del = m == 0 ? s.y : buf.eval(t1 - c.tau).y;
    f = drift(p, s, y_del);
    buf.push(t1, s, f);
    traj.states.push_back(s);
    traj.drifts.push_back(f);
  }
  return traj;
}

}  // namespace

Trajectory integrate_sdde(const StochasticModel& model,
                          const HistoryFunction& psi, const SolverConfig& cfg,
                          RngStream& stream) {
  const double root_dt = std::sqrt(cfg.snapped().dt);
  return integrate_sdde_impl(model, psi, cfg, [&](long) {
    const double dw1 = root_dt * stream.next_gaussian();
    const double dw2 = root_dt * stream.next_gaussian();
    return std::pair<double, double>{dw1, dw2};
  });
}

Trajectory integrate_sdde(const StochasticModel& model,
                          const HistoryFunction& psi, const SolverConfig& cfg,
                          const WienerIncrements& increments) {
  const SolverConfig c = cfg.snapped();
  if (increments.n_dims < 2) {
    throw ValidationError("increments: n_dims must be >= 2");
  }
  if (increments.n_steps < static_cast<std::size_t>(c.n_steps())) {
    throw ValidationError("increments: fewer steps than the configuration");
  }
  return integrate_sdde_impl(model, psi, cfg, [&](long i) {
    const auto step = static_cast<std::size_t>(i);
    return std::pair<double, double>{increments.at(step, 0),
                                     increments.at(step, 1)};
  });
}

}  // namespace delaydyn
