#include "adaptsa/sa_core.hpp"

#include <cmath>
#include <string>

namespace adaptsa {

namespace {

constexpr double kFeasTol = 1e-8;

double checked_gamma(const Step& s, std::int64_t k) {
  if (!(s.gamma > 0.0) || !std::isfinite(s.gamma)) {
    throw PolicyFailure("steplength policy produced gamma = " +
                        std::to_string(s.gamma) + " at k = " +
                        std::to_string(k));
  }
  return s.gamma;
}

void require_same_size(Eigen::Index a, Eigen::Index b, const char* who) {
  if (a != b) throw InvalidInput(std::string(who) + ": dimension mismatch");
}

}  // namespace

Vector stack(const SaddlePoint& z) {
  Vector out(z.x.size() + z.y.size());
  out << z.x, z.y;
  return out;
}

Point sa_step(const Point& x, const GradientSample& g, double gamma,
              const Projection& proj) {
  require_same_size(x.size(), g.size(), "sa_step");
  if (!all_finite(x) || !all_finite(g) || !std::isfinite(gamma)) {
    throw InvalidInput("sa_step: non-finite input");
  }
  if (!(gamma > 0.0)) throw InvalidInput("sa_step: gamma must be positive");
  return proj.project(x - gamma * g);
}

SaddlePoint saddle_step(const SaddlePoint& z, const GradientSample& gx,
                        const GradientSample& gy, double gamma,
                        const Projection& proj_x, const Projection& proj_y) {
  require_same_size(z.x.size(), gx.size(), "saddle_step");
  require_same_size(z.y.size(), gy.size(), "saddle_step");
  if (!all_finite(z.x) || !all_finite(z.y) || !all_finite(gx) ||
      !all_finite(gy) || !std::isfinite(gamma)) {
    throw InvalidInput("saddle_step: non-finite input");
  }
  if (!(gamma > 0.0)) throw InvalidInput("saddle_step: gamma must be positive");
  return {proj_x.project(z.x - gamma * gx), proj_y.project(z.y + gamma * gy)};
}

SaddlePoint saddle_step(const SaddlePoint& z, const GradientSample& gx,
                        const GradientSample& gy, double gamma) {
  const SimplexProjection simplex;
  return saddle_step(z, gx, gy, gamma, simplex, simplex);
}

SaRunResult run_sa(const StochasticOracle& oracle, const Projection& proj,
                   SteplengthPolicy& policy, const Point& x0, std::int64_t N,
                   const Point& reference, Rng& rng) {
  if (N < 1) throw InvalidInput("run_sa: N must be at least 1");
  require_same_size(x0.size(), reference.size(), "run_sa");
  require_same_size(x0.size(), oracle.dimension(), "run_sa");
  if (!proj.contains(x0, kFeasTol)) throw InvalidInput("run_sa: x0 infeasible");

  SaRunResult out;
  out.records.reserve(static_cast<std::size_t>(N));
  Point x = x0;
  for (std::int64_t k = 0; k < N; ++k) {
    const Step s = policy.next();
    const double gamma = checked_gamma(s, k);
    out.records.push_back({k, gamma, (x - reference).squaredNorm(), s.bound});
    x = sa_step(x, oracle.sample_gradient(x, rng), gamma, proj);
    if (!proj.contains(x, kFeasTol)) {
      throw NumericalFailure("run_sa: iterate left the feasible set",
                             static_cast<double>(k));
    }
  }
  out.terminal_error = (x - reference).squaredNorm();
  out.final_point = std::move(x);
  out.clamped = policy.clamped();
  return out;
}

SaRunResult run_saddle(const SaddleOracle& oracle, const Projection& proj_x,
                       const Projection& proj_y, SteplengthPolicy& policy,
                       const SaddlePoint& z0, std::int64_t N,
                       const SaddlePoint& reference, Rng& rng) {
  if (N < 1) throw InvalidInput("run_saddle: N must be at least 1");
  require_same_size(z0.x.size(), oracle.x_dimension(), "run_saddle");
  require_same_size(z0.y.size(), oracle.y_dimension(), "run_saddle");
  require_same_size(z0.x.size(), reference.x.size(), "run_saddle");
  require_same_size(z0.y.size(), reference.y.size(), "run_saddle");
  if (!proj_x.contains(z0.x, kFeasTol) || !proj_y.contains(z0.y, kFeasTol)) {
    throw InvalidInput("run_saddle: z0 infeasible");
  }

  const Vector ref = stack(reference);
  SaRunResult out;
  out.records.reserve(static_cast<std::size_t>(N));
  SaddlePoint z = z0;
  for (std::int64_t k = 0; k < N; ++k) {
    const Step s = policy.next();
    const double gamma = checked_gamma(s, k);
    out.records.push_back({k, gamma, (stack(z) - ref).squaredNorm(), s.bound});
    auto [gx, gy] = oracle.sample(z, rng);
    z = saddle_step(z, gx, gy, gamma, proj_x, proj_y);
    if (!proj_x.contains(z.x, kFeasTol) || !proj_y.contains(z.y, kFeasTol)) {
      throw NumericalFailure("run_saddle: iterate left the feasible set",
                             static_cast<double>(k));
    }
  }
  out.final_point = stack(z);
  out.terminal_error = (out.final_point - ref).squaredNorm();
  out.clamped = policy.clamped();
  return out;
}

namespace {

template <class Draw>
double second_moment(Draw draw, Eigen::Index dim, int m) {
  if (m < 2) throw InvalidInput("estimate_noise_second_moment: m < 2");
  // Welford accumulation of the trace of the covariance.
  Vector mean = Vector::Zero(dim);
  double m2 = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vector g = draw();
    const Vector delta = g - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta.dot(g - mean);
  }
  return m2 / static_cast<double>(m - 1);
}

}  // namespace

double estimate_noise_second_moment(const StochasticOracle& oracle,
                                    const Point& x, int m, Rng& rng) {
  return second_moment([&] { return oracle.sample_gradient(x, rng); },
                       oracle.dimension(), m);
}

double estimate_noise_second_moment(const SaddleOracle& oracle,
                                    const SaddlePoint& z, int m, Rng& rng) {
  return second_moment(
      [&] {
        auto [gx, gy] = oracle.sample(z, rng);
        Vector g(gx.size() + gy.size());
        g << gx, gy;
        return g;
      },
      oracle.x_dimension() + oracle.y_dimension(), m);
}

}  // namespace adaptsa
