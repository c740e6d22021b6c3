#pragma once

#include <stdexcept>
#include <string>

namespace nchns {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two fields (or a field and an operator) live on different grids.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// A structural hypothesis on the data (positivity, symmetry, bounds) fails.
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

/// Time-step restriction violated. Carries the largest admissible step.
class CflViolation : public Error {
 public:
  CflViolation(const std::string& what, double suggested_dt, int step)
      : Error(what), suggested_dt_(suggested_dt), step_(step) {}

  double suggested_dt() const noexcept { return suggested_dt_; }
  int step() const noexcept { return step_; }

 private:
  double suggested_dt_;
  int step_;
};

/// A linear solve or time step failed. `step` is the failing step index
/// (reversed-time index for backward sweeps), or -1 when not applicable.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, int step = -1, double residual = 0.0)
      : Error(what), step_(step), residual_(residual) {}

  int step() const noexcept { return step_; }
  double residual() const noexcept { return residual_; }

 private:
  int step_;
  double residual_;
};

/// Invalid run configuration. `key` names the offending configuration key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace nchns
