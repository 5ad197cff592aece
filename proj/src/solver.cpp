#include "delaydyn/solver.hpp"

#include <cmath>
#include <sstream>

#include "delaydyn/errors.hpp"

namespace delaydyn {

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::RK4: return "rk4";
    case Scheme::EulerMaruyama: return "euler-maruyama";
    case Scheme::Milstein: return "milstein";
  }
  return "unknown";
}

SolverConfig SolverConfig::snapped() const {
  SolverConfig out = *this;
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    std::ostringstream os;
    os << "dt: must be finite and > 0 (got " << dt << ")";
    throw ValidationError(os.str());
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    std::ostringstream os;
    os << "t_end: must be finite and > 0 (got " << t_end << ")";
    throw ValidationError(os.str());
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    std::ostringstream os;
    os << "tau: must be finite and >= 0 (got " << tau << ")";
    throw ValidationError(os.str());
  }
  if (tau > 0.0) {
    if (dt > tau * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "dt: must not exceed tau when tau > 0 (dt = " << dt
         << ", tau = " << tau << "); shrink dt";
      throw ValidationError(os.str());
    }
    const long m = std::max(1L, std::lround(tau / dt));
    out.dt = tau / static_cast<double>(m);
  }
  return out;
}

long SolverConfig::n_steps() const {
  // The epsilon absorbs binary representation error in t_end/dt so that an
  // exact multiple yields exactly t_end/dt steps.
  return static_cast<long>(std::floor(t_end / dt + 1e-9));
}

}  // namespace delaydyn
