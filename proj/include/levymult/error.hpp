#pragma once

#include <stdexcept>
#include <string>

namespace levymult {

/// Malformed or out-of-domain arguments (bad alpha, asymmetric modulator, s >= 0, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The measure is valid but the requested operation cannot handle it
/// (e.g. atoms off the lattice used for transition measures).
class UnsupportedMeasure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested at a point where the quantity is undefined.
class SingularPoint : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Adaptive quadrature did not reach the requested tolerance.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, double estimate, double error_estimate);

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

}  // namespace levymult
