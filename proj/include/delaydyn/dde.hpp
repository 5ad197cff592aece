#pragma once

#include <functional>

#include "delaydyn/history.hpp"
#include "delaydyn/solver.hpp"

namespace delaydyn {

/// Right-hand side of a system with one discrete delay:
/// (t, current state, state at t - tau) -> rates.
using DelayedField =
    std::function<Rates(double t, const State& s, const State& delayed)>;

/// The predator-prey field of the deterministic model; binds a validated
/// copy of the parameters and reads only the y component of the delayed
/// state.
DelayedField predator_prey_field(const ModelParams& params);

/// Classic RK4 method of steps. Every stage's delayed argument comes from
/// the history buffer at (stage time - tau); interior segments interpolate
/// with cubic Hermite so the scheme keeps its 4th order. With tau = 0 this
/// is plain RK4 (the delayed argument is the stage state itself).
///
/// The initial state is psi(0). Throws DivergenceError when the state stops
/// being finite.
Trajectory integrate_dde(const DelayedField& field, const HistoryFunction& psi,
                         const SolverConfig& cfg);

}  // namespace delaydyn
