#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace adaptsa {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point in the decision space of a problem.
using Point = Vector;

/// A sampled (sub)gradient of the integrand at some query point.
using GradientSample = Vector;

/// Malformed arguments: non-finite coordinates, dimension mismatches,
/// out-of-range indices.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A formula evaluated outside the domain where it is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Problem/scheme constants that violate a hypothesis of the scheme.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A steplength policy produced a non-positive or non-finite step.
class PolicyFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative numerical routine failed to reach its tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace adaptsa
