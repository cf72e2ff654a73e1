#pragma once

#include <cstdint>
#include <functional>

#include "adaptsa/problems.hpp"
#include "adaptsa/projections.hpp"
#include "adaptsa/types.hpp"

namespace adaptsa {

struct SaaOptions {
  std::int64_t sample_size = 100000;
  int max_iterations = 200000;
  /// Stop when ||x - P(x - grad/L_k)|| * L_k falls below this.
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
};

struct SaaResult {
  Vector x;
  bool converged = false;
  double gradient_mapping = 0.0;
  int iterations = 0;
};

using GradientMap = std::function<Vector(const Vector&)>;

/// Projected gradient iteration z <- P(z - t F(z)) for a strongly monotone
/// map F (a gradient, or a saddle operator), with t adapted to a local
/// Lipschitz estimate. Returns the iterate with the smallest gradient mapping
/// and converged = false if the budget runs out first.
SaaResult solve_projected(const GradientMap& F, const Projection& proj,
                          const Vector& z0, double tolerance,
                          int max_iterations);

/// Reference solution of the smoothed utility problem. The Gaussian xi is
/// integrated in closed form; the ball perturbation is sampled in antithetic
/// pairs.
SaaResult saa_reference(const UtilityProblem& problem, const SaaOptions& opts);

/// Stacked (x, y) reference for the smoothed regularized matrix game.
SaaResult saa_reference(const BimatrixProblem& problem, const SaaOptions& opts);

/// Reference for the network problem from antithetic draws of k.
SaaResult saa_reference(const NetworkProblem& problem, const SaaOptions& opts);

}  // namespace adaptsa
