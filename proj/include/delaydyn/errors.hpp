#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace delaydyn {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid parameters, configuration, or inputs. CLI exit code 1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// A transition probability exceeded 1; the step size is too large for the
/// current state.
class StepSizeError : public ValidationError {
 public:
  explicit StepSizeError(const std::string& what) : ValidationError(what) {}
};

/// History query outside the covered delay window.
class OutOfWindowError : public ValidationError {
 public:
  explicit OutOfWindowError(const std::string& what) : ValidationError(what) {}
};

/// Post-transient window contains no nodes.
class EmptyWindowError : public ValidationError {
 public:
  explicit EmptyWindowError(const std::string& what) : ValidationError(what) {}
};

/// Numerical blow-up or other runtime failure of an integration.
/// CLI exit code 2.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// A trajectory became non-finite at time `t`.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, double t)
      : NumericalError(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// One or more ensemble members diverged; `run_indices()` lists them.
class EnsembleError : public NumericalError {
 public:
  EnsembleError(const std::string& what, std::vector<int> run_indices)
      : NumericalError(what), runs_(std::move(run_indices)) {}
  const std::vector<int>& run_indices() const { return runs_; }

 private:
  std::vector<int> runs_;
};

}  // namespace delaydyn
