#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "adaptsa/projections.hpp"
#include "adaptsa/rng.hpp"
#include "adaptsa/steplength.hpp"
#include "adaptsa/types.hpp"

namespace adaptsa {

/// Source of sampled gradients of F(., xi) for a minimization problem.
class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;
  virtual GradientSample sample_gradient(const Point& x, Rng& rng) const = 0;
  virtual Eigen::Index dimension() const = 0;
};

struct SaddlePoint {
  Point x;
  Point y;
};

/// Stacked vector (x, y).
Vector stack(const SaddlePoint& z);

/// Source of sampled partial gradients for a min-max problem. gx is the
/// descent direction for x; gy is the ascent direction for y.
class SaddleOracle {
 public:
  virtual ~SaddleOracle() = default;
  virtual std::pair<GradientSample, GradientSample> sample(
      const SaddlePoint& z, Rng& rng) const = 0;
  virtual Eigen::Index x_dimension() const = 0;
  virtual Eigen::Index y_dimension() const = 0;
};

struct SaRunRecord {
  std::int64_t k;
  double gamma;
  double squared_error;
  double bound;
};

struct SaRunResult {
  std::vector<SaRunRecord> records;
  /// ||x_N - reference||^2 after the last update.
  double terminal_error = 0.0;
  Point final_point;
  bool clamped = false;
};

/// proj(x - gamma*g).
Point sa_step(const Point& x, const GradientSample& g, double gamma,
              const Projection& proj);

/// x' = Px(x - gamma*gx), y' = Py(y + gamma*gy).
SaddlePoint saddle_step(const SaddlePoint& z, const GradientSample& gx,
                        const GradientSample& gy, double gamma,
                        const Projection& proj_x, const Projection& proj_y);

/// Same with both players on the unit simplex.
SaddlePoint saddle_step(const SaddlePoint& z, const GradientSample& gx,
                        const GradientSample& gy, double gamma);

/// Runs N projected SA steps from x0. Record k holds the step used at k and
/// the error of x_k before that step.
SaRunResult run_sa(const StochasticOracle& oracle, const Projection& proj,
                   SteplengthPolicy& policy, const Point& x0, std::int64_t N,
                   const Point& reference, Rng& rng);

/// Saddle-point analogue of run_sa; errors are taken on the stacked vector.
SaRunResult run_saddle(const SaddleOracle& oracle, const Projection& proj_x,
                       const Projection& proj_y, SteplengthPolicy& policy,
                       const SaddlePoint& z0, std::int64_t N,
                       const SaddlePoint& reference, Rng& rng);

/// Estimate of E||g - E g||^2 at x from m draws.
double estimate_noise_second_moment(const StochasticOracle& oracle,
                                    const Point& x, int m, Rng& rng);
double estimate_noise_second_moment(const SaddleOracle& oracle,
                                    const SaddlePoint& z, int m, Rng& rng);

}  // namespace adaptsa
