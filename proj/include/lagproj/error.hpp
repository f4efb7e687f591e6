#pragma once

#include <stdexcept>
#include <string>

namespace lagproj {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar parameter is outside its domain (St <= 0, n_cells < 3, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// A state is not admissible for the model (non-finite, imaginary sound speed).
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// Density or specific volume became non-positive.
class PositivityError : public Error {
 public:
  using Error::Error;
};

/// Relaxation speed collapsed to zero (pressureless state at rest).
class DegenerateSpeed : public Error {
 public:
  using Error::Error;
};

/// A stability bound was violated; carries the largest admissible time step.
class StepRejected : public Error {
 public:
  StepRejected(const std::string& what, double admissible_dt)
      : Error(what), admissible_dt_(admissible_dt) {}

  [[nodiscard]] double admissible_dt() const noexcept { return admissible_dt_; }

 private:
  double admissible_dt_;
};

/// The banded solver was handed a matrix it cannot factor without pivoting.
class SolverAssumption : public Error {
 public:
  using Error::Error;
};

/// A run configuration admits no usable time step.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration text. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  [[nodiscard]] int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace lagproj
