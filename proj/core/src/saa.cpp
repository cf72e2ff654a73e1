#include "adaptsa/saa.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "adaptsa/rng.hpp"
#include "adaptsa/smoothing.hpp"

namespace adaptsa {

namespace {

void check_options(const SaaOptions& opts) {
  if (opts.sample_size < 1000) {
    throw ConfigError("saa_reference: sample size must be at least 1000");
  }
  if (!(opts.tolerance > 0.0) || opts.max_iterations < 1) {
    throw ConfigError("saa_reference: bad solver budget");
  }
}

class SimplexPair final : public Projection {
 public:
  explicit SimplexPair(Eigen::Index n) : n_(n) {}
  Vector project(const Vector& v) const override {
    Vector out(v.size());
    out << project_simplex(v.head(n_)), project_simplex(v.tail(v.size() - n_));
    return out;
  }
  bool contains(const Vector& z, double tol) const override {
    const SimplexProjection s;
    return s.contains(z.head(n_), tol) && s.contains(z.tail(z.size() - n_), tol);
  }

 private:
  Eigen::Index n_;
};

}  // namespace

SaaResult solve_projected(const GradientMap& F, const Projection& proj,
                          const Vector& z0, double tolerance,
                          int max_iterations) {
  Vector z = proj.project(z0);
  Vector Fz = F(z);
  double t = 1.0;
  SaaResult best;
  best.x = z;
  best.gradient_mapping = std::numeric_limits<double>::infinity();

  for (int it = 0; it < max_iterations; ++it) {
    // Extragradient step with a step size that satisfies
    // t ||F(y) - F(z)|| <= 0.9 ||y - z||.
    Vector y;
    Vector Fy;
    double gap = 0.0;
    for (int bt = 0; bt < 200; ++bt) {
      y = proj.project(z - t * Fz);
      gap = (y - z).norm();
      if (gap == 0.0) break;
      Fy = F(y);
      if (t * (Fy - Fz).norm() <= 0.9 * gap) break;
      t *= 0.5;
    }
    const double mapping = gap / t;
    if (mapping < best.gradient_mapping) {
      best.x = z;
      best.gradient_mapping = mapping;
    }
    best.iterations = it;
    if (mapping < tolerance) {
      best.converged = true;
      return best;
    }
    z = proj.project(z - t * Fy);
    Fz = F(z);
    t *= 1.5;
  }
  return best;
}

SaaResult saa_reference(const UtilityProblem& problem, const SaaOptions& opts) {
  check_options(opts);
  const Eigen::Index n = problem.dimension();
  const Eigen::Index half = (opts.sample_size + 1) / 2;
  const Eigen::Index m = 2 * half;

  Rng rng(opts.seed, Stream::kReference);
  Matrix Z(m, n);
  for (Eigen::Index i = 0; i < half; ++i) {
    const Vector z = sample_ball(n, problem.epsilon(), rng);
    Z.row(2 * i) = z.transpose();
    Z.row(2 * i + 1) = -z.transpose();
  }
  const Vector& a = problem.a();
  const Vector az = Z * a;
  const Vector zz = Z.rowwise().squaredNorm();
  const Vector zbar = Z.colwise().mean().transpose();
  const double eta = problem.eta();
  const PiecewiseLinear& phi = problem.phi();

  auto grad = [&](const Vector& x) -> Vector {
    const Vector zx = Z * x;
    const double ax = a.dot(x);
    const double xx = x.squaredNorm();
    Vector w(m);
    double sum_dmu = 0.0;
    double sum_w = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double sigma = std::sqrt(std::max(0.0, xx + 2.0 * zx(i) + zz(i)));
      const auto e = phi.gaussian_expectation(ax + az(i), sigma);
      sum_dmu += e.d_mu;
      w(i) = sigma > 0.0 ? e.d_sigma / sigma : 0.0;
      sum_w += w(i);
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    return inv_m * (sum_dmu * a + sum_w * x + Z.transpose() * w) +
           eta * (x + zbar);
  };

  const SimplexProjection simplex;
  return solve_projected(grad, simplex, problem.barycenter(), opts.tolerance,
                         opts.max_iterations);
}

SaaResult saa_reference(const BimatrixProblem& problem,
                        const SaaOptions& opts) {
  check_options(opts);
  const Eigen::Index n = problem.x_dimension();
  const Eigen::Index half = (opts.sample_size + 1) / 2;
  const Eigen::Index m = 2 * half;

  Rng rng(opts.seed, Stream::kReference);
  Matrix Z(2 * n, m);
  for (Eigen::Index i = 0; i < half; ++i) {
    const Vector z = sample_ball(2 * n, problem.epsilon(), rng);
    Z.col(2 * i) = z;
    Z.col(2 * i + 1) = -z;
  }
  const Vector zbar = Z.rowwise().mean();
  const Matrix& A = problem.A();
  const double eta = problem.eta();

  // Mean over the sample of the shifted, normalized index weights.
  auto mean_weights = [&](const Vector& base, Eigen::Index offset) -> Vector {
    Vector acc = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vector w = base + Z.col(i).segment(offset, n);
      const double shift = std::min(0.0, w.minCoeff());
      const double total = w.sum() - shift * static_cast<double>(n);
      if (!(total > 0.0)) {
        throw NumericalFailure("saa_reference: degenerate index weights",
                               total);
      }
      acc += (w.array() - shift).matrix() / total;
    }
    return acc / static_cast<double>(m);
  };

  // Operator (E gx, -E gy) of the sampled oracle with index draws averaged out.
  auto op = [&](const Vector& zv) -> Vector {
    const Vector x = zv.head(n);
    const Vector y = zv.tail(n);
    Vector out(2 * n);
    out.head(n) = A * mean_weights(y, n) + eta * (x + zbar.head(n));
    out.tail(n) = -(A.transpose() * mean_weights(x, 0)) +
                  eta * (y + zbar.tail(n));
    return out;
  };

  const SimplexPair proj(n);
  const SaddlePoint b = problem.barycenter();
  return solve_projected(op, proj, stack(b), opts.tolerance,
                         opts.max_iterations);
}

SaaResult saa_reference(const NetworkProblem& problem, const SaaOptions& opts) {
  check_options(opts);
  const Eigen::Index half = (opts.sample_size + 1) / 2;
  Rng rng(opts.seed, Stream::kReference);
  Vector ksum = Vector::Zero(problem.dimension());
  for (Eigen::Index i = 0; i < half; ++i) {
    const Vector k = problem.draw_k(rng);
    ksum += k;
    ksum += ((problem.k_lo() + problem.k_hi()) - k.array()).matrix();
  }
  const Vector kbar = ksum / static_cast<double>(2 * half);
  const Matrix& A = problem.A();
  auto grad = [&](const Vector& x) { return network_gradient(x, kbar, A); };

  const CapacityProjection proj(A, problem.C(), DykstraOptions{1e-13, 2000000});
  return solve_projected(grad, proj, Vector::Zero(problem.dimension()),
                         opts.tolerance, opts.max_iterations);
}

}  // namespace adaptsa
