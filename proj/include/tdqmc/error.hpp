#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tdqmc {

// Base of every exception thrown by the library. The CLI maps the concrete
// type onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input. `field` is the dotted config path that failed.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  GridMismatchError() : Error("orbitals live on different grids") {}
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NodalRegionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SymmetryError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& message, std::vector<double> trace)
      : NumericalError(message), trace_(std::move(trace)) {}
  const std::vector<double>& energy_trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

// Non-finite amplitude during guide propagation.
class PropagationError : public NumericalError {
 public:
  PropagationError(int electron, long walker, long step)
      : NumericalError("non-finite guide amplitude (electron " + std::to_string(electron) +
                       ", walker " + std::to_string(walker) + ", step " + std::to_string(step) +
                       ")"),
        electron_(electron),
        walker_(walker),
        step_(step) {}
  int electron() const noexcept { return electron_; }
  long walker() const noexcept { return walker_; }
  long step() const noexcept { return step_; }

 private:
  int electron_;
  long walker_;
  long step_;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace tdqmc
