#include "delaydyn/dde.hpp"

#include <cmath>
#include <sstream>

#include "delaydyn/errors.hpp"

namespace delaydyn {

namespace {

State clamp_state(State s) {
  return {s.x < 0.0 ? 0.0 : s.x, s.y < 0.0 ? 0.0 : s.y};
}

bool finite(const State& s) {
  return std::isfinite(s.x) && std::isfinite(s.y);
}

[[noreturn]] void throw_divergence(double t) {
  std::ostringstream os;
  os << "trajectory diverged (non-finite state) at t = " << t;
  throw DivergenceError(os.str(), t);
}

}  // namespace

DelayedField predator_prey_field(const ModelParams& params) {
  params.validate();
  return [params](double, const State& s, const State& delayed) -> Rates {
    return drift(params, s, delayed.y);
  };
}

Trajectory integrate_dde(const DelayedField& field, const HistoryFunction& psi,
                         const SolverConfig& cfg) {
  const SolverConfig c = cfg.snapped();
  const double dt = c.dt;
  const long n = c.n_steps();
  const long m = c.tau > 0.0 ? std::lround(c.tau / dt) : 0;

  HistoryBuffer buf(psi, c.tau, dt, c.clamp_nonnegative);

  Trajectory traj;
  traj.t0 = 0.0;
  traj.dt = dt;
  traj.states.reserve(static_cast<std::size_t>(n) + 1);
  traj.drifts.reserve(static_cast<std::size_t>(n) + 1);

  State s = psi.eval(0.0);
  if (c.clamp_nonnegative) s = clamp_state(s);
  if (!finite(s)) throw_divergence(0.0);

  // Delayed argument of a stage at time `ts` with trial state `stage`.
  // With no delay the field degenerates to an ODE right-hand side.
  const auto delayed_at = [&](double ts, const State& stage) -> State {
    return m == 0 ? stage : buf.eval(ts - c.tau);
  };

  Rates f = field(0.0, s, delayed_at(0.0, s));
  buf.set_top_drift(f);
  traj.states.push_back(s);
  traj.drifts.push_back(f);

  for (long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double th = t + 0.5 * dt;
    const double t1 = static_cast<double>(i + 1) * dt;

    const Rates k1 = f;
    const State s2{s.x + 0.5 * dt * k1.dx, s.y + 0.5 * dt * k1.dy};
    const Rates k2 = field(th, s2, delayed_at(th, s2));
    const State s3{s.x + 0.5 * dt * k2.dx, s.y + 0.5 * dt * k2.dy};
    const Rates k3 = field(th, s3, delayed_at(th, s3));
    const State s4{s.x + dt * k3.dx, s.y + dt * k3.dy};
    const Rates k4 = field(t1, s4, delayed_at(t1, s4));

    State next{s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
               s.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy)};
    if (c.clamp_nonnegative) next = clamp_state(next);
    if (!finite(next)) throw_divergence(t1);

    s = next;
    f = field(t1, s, delayed_at(t1, s));
    buf.push(t1, s, f);
    traj.states.push_back(s);
    traj.drifts.push_back(f);
  }
  return traj;
}

}  // namespace delaydyn
