#pragma once

#include <functional>

#include "adaptsa/rng.hpp"
#include "adaptsa/sa_core.hpp"
#include "adaptsa/types.hpp"

namespace adaptsa {

/// A random integrand F(u, xi) that is convex in u and has subgradients.
class NonsmoothIntegrand {
 public:
  virtual ~NonsmoothIntegrand() = default;
  virtual Eigen::Index dimension() const = 0;
  /// Draws xi. Integrands without randomness return an empty vector.
  virtual Vector draw(Rng& rng) const = 0;
  virtual double value(const Vector& u, const Vector& xi) const = 0;
  virtual Vector subgradient(const Vector& u, const Vector& xi) const = 0;
};

/// Uniform sample from the n-dimensional ball of radius epsilon.
Vector sample_ball(Eigen::Index n, double epsilon, Rng& rng);

/// Volume of the unit n-ball, pi^{n/2}/Gamma(n/2 + 1).
double ball_volume_coeff(int n);
double log_ball_volume_coeff(int n);

/// n!!/(n-1)!!, with 0!! = 1.
double double_factorial_ratio(int n);

/// kappa * n!!/(n-1)!! * C/epsilon, kappa = 2/pi for even n and 1 for odd n.
double smoothing_lipschitz(int n, double C, double epsilon);

/// One draw of s in d_u F(x + z, xi): xi first, then z uniform on the ball.
Vector smoothed_subgradient(const NonsmoothIntegrand& f, const Point& x,
                            double epsilon, Rng& rng);

struct Estimate {
  double mean;
  double std_error;
};

/// Monte-Carlo mean of f(x + z) over m ball draws, with its standard error.
Estimate smoothed_value_estimate(const std::function<double(const Vector&)>& f,
                                 const Point& x, double epsilon, std::int64_t m,
                                 Rng& rng);

/// Stochastic oracle for the smoothed problem E[F(x + z, xi)].
class SmoothedOracle final : public StochasticOracle {
 public:
  SmoothedOracle(const NonsmoothIntegrand& inner, double epsilon);
  GradientSample sample_gradient(const Point& x, Rng& rng) const override;
  Eigen::Index dimension() const override { return inner_.dimension(); }
  double epsilon() const noexcept { return epsilon_; }

 private:
  const NonsmoothIntegrand& inner_;
  double epsilon_;
};

}  // namespace adaptsa
