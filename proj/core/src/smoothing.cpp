#include "adaptsa/smoothing.hpp"

#include <cmath>
#include <numbers>

namespace adaptsa {

Vector sample_ball(Eigen::Index n, double epsilon, Rng& rng) {
  if (n < 1) throw InvalidInput("sample_ball: n must be at least 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidInput("sample_ball: epsilon must be nonnegative");
  }
  Vector z(n);
  double norm2 = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    norm2 = z.squaredNorm();
  } while (norm2 == 0.0);
  const double radius =
      epsilon * std::pow(rng.uniform_open(), 1.0 / static_cast<double>(n));
  return z * (radius / std::sqrt(norm2));
}

double log_ball_volume_coeff(int n) {
  if (n < 1) throw InvalidInput("ball_volume_coeff: n must be at least 1");
  const double log_pi = std::log(std::numbers::pi);
  if (n % 2 == 0) {
    // pi^m / m!
    const int m = n / 2;
    double s = m * log_pi;
    for (int i = 2; i <= m; ++i) s -= std::log(static_cast<double>(i));
    return s;
  }
  // 2 (2 pi)^m / n!!, m = (n - 1)/2
  const int m = (n - 1) / 2;
  double s = std::numbers::ln2 + m * (std::numbers::ln2 + log_pi);
  for (int i = 3; i <= n; i += 2) s -= std::log(static_cast<double>(i));
  return s;
}

double ball_volume_coeff(int n) {
  if (n < 1) throw InvalidInput("ball_volume_coeff: n must be at least 1");
  if (n <= 150) {
    if (n % 2 == 0) {
      double c = 1.0;
      for (int i = 1; i <= n / 2; ++i) c *= std::numbers::pi / i;
      return c;
    }
    double c = 2.0;
    for (int i = 3; i <= n; i += 2) c *= 2.0 * std::numbers::pi / i;
    return c;
  }
  return std::exp(log_ball_volume_coeff(n));
}

double double_factorial_ratio(int n) {
  if (n < 1) throw InvalidInput("double_factorial_ratio: n must be at least 1");
  if (n <= 150) {
    double r = 1.0;
    for (int i = n; i >= 2; i -= 2) r *= static_cast<double>(i) / (i - 1);
    return r;
  }
  double s = 0.0;
  for (int i = n; i >= 2; i -= 2) {
    s += std::log(static_cast<double>(i)) - std::log(static_cast<double>(i - 1));
  }
  return std::exp(s);
}

double smoothing_lipschitz(int n, double C, double epsilon) {
  if (!(C > 0.0) || !(epsilon > 0.0)) {
    throw InvalidInput("smoothing_lipschitz: C and epsilon must be positive");
  }
  const double kappa = n % 2 == 0 ? 2.0 / std::numbers::pi : 1.0;
  return kappa * double_factorial_ratio(n) * C / epsilon;
}

Vector smoothed_subgradient(const NonsmoothIntegrand& f, const Point& x,
                            double epsilon, Rng& rng) {
  if (x.size() != f.dimension()) {
    throw InvalidInput("smoothed_subgradient: dimension mismatch");
  }
  const Vector xi = f.draw(rng);
  const Vector z = sample_ball(x.size(), epsilon, rng);
  return f.subgradient(x + z, xi);
}

Estimate smoothed_value_estimate(const std::function<double(const Vector&)>& f,
                                 const Point& x, double epsilon, std::int64_t m,
                                 Rng& rng) {
  if (m < 1) throw InvalidInput("smoothed_value_estimate: m must be positive");
  double mean = 0.0;
  double m2 = 0.0;
  for (std::int64_t i = 0; i < m; ++i) {
    const double v = f(x + sample_ball(x.size(), epsilon, rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double se =
      m > 1 ? std::sqrt(m2 / static_cast<double>(m - 1) / static_cast<double>(m))
            : 0.0;
  return {mean, se};
}

SmoothedOracle::SmoothedOracle(const NonsmoothIntegrand& inner, double epsilon)
    : inner_(inner), epsilon_(epsilon) {
  if (!(epsilon >= 0.0)) {
    throw ConfigError("SmoothedOracle: epsilon must be nonnegative");
  }
}

GradientSample SmoothedOracle::sample_gradient(const Point& x, Rng& rng) const {
  if (epsilon_ == 0.0) return inner_.subgradient(x, inner_.draw(rng));
  return smoothed_subgradient(inner_, x, epsilon_, rng);
}

}  // namespace adaptsa
