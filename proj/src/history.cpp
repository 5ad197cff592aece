#include "delaydyn/history.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "delaydyn/errors.hpp"

namespace delaydyn {

namespace {

State clamp_state(State s) {
  return {s.x < 0.0 ? 0.0 : s.x, s.y < 0.0 ? 0.0 : s.y};
}

}  // namespace

HistoryFunction HistoryFunction::constant(State s0) {
  HistoryFunction h;
  h.is_constant_ = true;
  h.constant_value_ = s0;
  h.min_time_ = -std::numeric_limits<double>::infinity();
  return h;
}

HistoryFunction HistoryFunction::tabulated(std::vector<double> times,
                                           std::vector<State> values) {
  if (times.size() != values.size() || times.empty()) {
    throw ValidationError("history table: times and values must be non-empty "
                          "and of equal length");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ValidationError("history table: times must be strictly increasing");
    }
  }
  if (times.back() < 0.0) {
    throw ValidationError("history table: must cover t = 0");
  }
  HistoryFunction h;
  h.is_constant_ = false;
  h.times_ = std::move(times);
  h.values_ = std::move(values);
  h.min_time_ = h.times_.front();
  return h;
}

State HistoryFunction::eval(double t) const {
  if (is_constant_) return constant_value_;
  // Tolerate endpoint rounding from snapped-grid sampling.
  const double span = times_.back() - times_.front();
  const double slack = 1e-9 * std::max(1.0, span);
  if (t < times_.front() - slack || t > times_.back() + slack) {
    std::ostringstream os;
    os << "history function undefined at t = " << t << " (domain ["
       << times_.front() << ", " << times_.back() << "])";
    throw ValidationError(os.str());
  }
  const double tc = std::clamp(t, times_.front(), times_.back());
  auto it = std::upper_bound(times_.begin(), times_.end(), tc);
  std::size_t hi = std::min<std::size_t>(
      std::max<std::ptrdiff_t>(it - times_.begin(), 1), times_.size() - 1);
  std::size_t lo = hi - 1;
  const double w = (tc - times_[lo]) / (times_[hi] - times_[lo]);
  return {(1.0 - w) * values_[lo].x + w * values_[hi].x,
          (1.0 - w) * values_[lo].y + w * values_[hi].y};
}

HistoryBuffer::HistoryBuffer(const HistoryFunction& psi, double tau, double dt,
                             bool clamp_nonnegative)
    : dt_(dt), tau_(tau), clamp_(clamp_nonnegative) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError("dt: must be finite and > 0");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ValidationError("tau: must be finite and >= 0");
  }
  m_ = std::lround(tau / dt);
  if (std::abs(static_cast<double>(m_) * dt - tau) >
      1e-9 * std::max(tau, dt)) {
    throw ValidationError("dt must divide tau exactly; use the snapped dt");
  }
  base_index_ = -m_;
  top_index_ = 0;
  nodes_.resize(static_cast<std::size_t>(m_) + 1);
  for (long i = -m_; i <= 0; ++i) {
    State s = psi.eval(static_cast<double>(i) * dt_);
    nodes_[static_cast<std::size_t>(i + m_)] = {s, {}, false};
  }
}

void HistoryBuffer::set_top_drift(Rates f) {
  nodes_.back().f = f;
  nodes_.back().has_drift = true;
}

void HistoryBuffer::push(double t, State s, Rates f) {
  const double expected = static_cast<double>(top_index_ + 1) * dt_;
  if (std::abs(t - expected) > 1e-6 * dt_) {
    std::ostringstream os;
    os << "non-contiguous push at t = " << t << " (expected " << expected
       << ")";
    throw ValidationError(os.str());
  }
  nodes_.push_back({s, f, true});
  ++top_index_;
  // Keep [top - tau - 2dt, top].
  const long keep_from = top_index_ - m_ - 2;
  while (base_index_ < keep_from) {
    nodes_.pop_front();
    ++base_index_;
  }
}

State HistoryBuffer::eval(double t) const {
  const double u = t / dt_;
  const double lo = static_cast<double>(top_index_ - m_);
  const double hi = static_cast<double>(top_index_);
  const double tol = 1e-6;
  if (u < lo - tol || u > hi + tol) {
    std::ostringstream os;
    os << "query at t = " << t << " outside the delay window ["
       << lo * dt_ << ", " << hi * dt_ << "]";
    throw OutOfWindowError(os.str());
  }
  const double nearest = std::round(u);
  if (std::abs(u - nearest) <= tol) {
    long idx = static_cast<long>(nearest);
    idx = std::clamp(idx, top_index_ - m_, top_index_);
    // Stored nodes may extend below the window; the clamp above keeps the
    // promised window semantics.
    return node(idx).s;
  }
  const long j = static_cast<long>(std::floor(u));
  const double theta = u - static_cast<double>(j);
  const Node& n0 = node(j);
  const Node& n1 = node(j + 1);
  State out;
  if (j >= 0 && n0.has_drift && n1.has_drift) {
    // Cubic Hermite with the stored drifts as slopes.
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + theta;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    out = {h00 * n0.s.x + h10 * dt_ * n0.f.dx + h01 * n1.s.x +
               h11 * dt_ * n1.f.dx,
           h00 * n0.s.y + h10 * dt_ * n0.f.dy + h01 * n1.s.y +
               h11 * dt_ * n1.f.dy};
  } else {
    // psi segment: values only, no derivatives.
    out = {(1.0 - theta) * n0.s.x + theta * n1.s.x,
           (1.0 - theta) * n0.s.y + theta * n1.s.y};
  }
  return clamp_ ? clamp_state(out) : out;
}

}  // namespace delaydyn
