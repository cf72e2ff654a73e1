#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "adaptsa/projections.hpp"
#include "adaptsa/rng.hpp"
#include "adaptsa/sa_core.hpp"
#include "adaptsa/smoothing.hpp"
#include "adaptsa/types.hpp"

namespace adaptsa {

// ---------------------------------------------------------------------------
// Piecewise-linear utility

/// phi(t) = max_i (v_i + s_i t).
class PiecewiseLinear {
 public:
  PiecewiseLinear(Vector v, Vector s);

  double value(double t) const;
  /// Index of the active piece; ties go to the lowest index.
  Eigen::Index active(double t) const;

  /// E phi(mu + sigma g) for g ~ N(0, 1), and its partials in mu and sigma.
  struct Expectation {
    double value;
    double d_mu;
    double d_sigma;
  };
  Expectation gaussian_expectation(double mu, double sigma) const;

  const Vector& intercepts() const noexcept { return v_; }
  const Vector& slopes() const noexcept { return s_; }

 private:
  Vector v_;
  Vector s_;
  // Upper envelope: piece indices in slope order, with breakpoints between.
  std::vector<Eigen::Index> hull_;
  std::vector<double> breaks_;
};

struct UtilityParams {
  int n = 20;
  int pieces = 10;
  double eta = 0.5;
  double epsilon = 0.5;
};

/// F(u, xi) = phi(sum_i (i/n + xi_i) u_i) + eta/2 ||u||^2, xi ~ N(0, I),
/// feasible set the unit simplex.
class UtilityProblem final : public NonsmoothIntegrand {
 public:
  UtilityProblem(int n, Vector v, Vector s, double eta, double epsilon);

  /// Intercepts and slopes uniform on [0, 1], intercepts sorted descending
  /// and slopes ascending.
  static UtilityProblem generate(const UtilityParams& params,
                                 std::uint64_t seed);

  Eigen::Index dimension() const override { return n_; }
  Vector draw(Rng& rng) const override;
  double value(const Vector& u, const Vector& xi) const override;
  /// s_{i*}(a + xi), truncated to norm C when a truncation is set, plus eta u.
  Vector subgradient(const Vector& u, const Vector& xi) const override;

  /// Untruncated s_{i*}(a + xi).
  Vector piece_subgradient(const Vector& u, const Vector& xi) const;

  /// E_xi F(u, xi) in closed form.
  double expected_value(const Vector& u) const;
  Vector expected_gradient(const Vector& u) const;

  /// Percentile estimate of a bound on ||s_{i*}(a + xi)|| at x.
  double estimate_subgradient_bound(const Point& x, int draws,
                                    double percentile, double factor,
                                    Rng& rng) const;

  void set_truncation(std::optional<double> C);
  std::optional<double> truncation() const noexcept { return truncation_; }

  Point barycenter() const;
  const Vector& a() const noexcept { return a_; }
  const PiecewiseLinear& phi() const noexcept { return phi_; }
  double eta() const noexcept { return eta_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  int n_;
  PiecewiseLinear phi_;
  Vector a_;
  double eta_;
  double epsilon_;
  std::optional<double> truncation_;
};

/// One smoothed draw: xi, then z on the epsilon-ball, then the subgradient.
GradientSample utility_oracle(const UtilityProblem& problem, const Point& x,
                              Rng& rng);

// ---------------------------------------------------------------------------
// Bilinear matrix game

/// A_ij = (i + j - 1)/(2n - 1) with 1-based indices.
Matrix bimatrix_matrix(int n);

/// min_x max_y x^T A y + eta/2 ||x||^2 - eta/2 ||y||^2 over two simplices,
/// smoothed by a perturbation drawn from the 2n-dimensional epsilon-ball.
class BimatrixProblem final : public SaddleOracle {
 public:
  BimatrixProblem(int n, double eta, double epsilon);

  /// gx = A_{.,l} + eta(x + zeta1), gy = A_{p,.} - eta(y + zeta2), with l and
  /// p drawn from the shifted perturbed y and x weights.
  std::pair<GradientSample, GradientSample> sample(const SaddlePoint& z,
                                                   Rng& rng) const override;
  Eigen::Index x_dimension() const override { return n_; }
  Eigen::Index y_dimension() const override { return n_; }

  double value(const Point& x, const Point& y) const;
  /// Exact (A y + eta x, A^T x - eta y).
  std::pair<Vector, Vector> exact_gradient(const SaddlePoint& z) const;

  SaddlePoint barycenter() const;
  const Matrix& A() const noexcept { return A_; }
  int n() const noexcept { return n_; }
  double eta() const noexcept { return eta_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  int n_;
  double eta_;
  double epsilon_;
  Matrix A_;
};

/// Index q drawn with probability (w_q - min(0, w))/sum_j (w_j - min(0, w)).
Eigen::Index sample_index(const Vector& w, Rng& rng);

// ---------------------------------------------------------------------------
// Network utility

/// Capacity presets: 3 is the base vector, 2 = base/0.75, 1 = 2*base.
Vector network_capacity(int which);

/// Random 0/1 link-user matrix with every row and column sum at least 1.
Matrix random_adjacency(Eigen::Index links, Eigen::Index users, double density,
                        Rng& rng);

/// (-k_i/(1 + x_i))_i + 2 A^T A x.
Vector network_gradient(const Vector& x, const Vector& k, const Matrix& A);
double network_value(const Vector& x, const Vector& k, const Matrix& A);

struct NetworkParams {
  int n = 5;
  int capacity_set = 3;
  double density = 0.4;
};

/// F(x, xi) = -sum_i k_i log(1 + x_i) + ||A x||^2 on {x >= 0, A x <= C},
/// with k_i uniform on (k_lo, k_hi).
class NetworkProblem final : public StochasticOracle {
 public:
  NetworkProblem(Matrix A, Vector C, double k_lo = 0.2, double k_hi = 1.0);

  static NetworkProblem generate(const NetworkParams& params,
                                 std::uint64_t seed);

  GradientSample sample_gradient(const Point& x, Rng& rng) const override;
  Eigen::Index dimension() const override { return A_.cols(); }

  Vector draw_k(Rng& rng) const;
  /// Per-user upper bound min over the user's links of C_l.
  Vector x_max() const;
  /// k_lo/(1 + max x_max)^2 plus the smallest eigenvalue of 2 A^T A if positive.
  double strong_convexity() const;
  /// k_hi plus the largest eigenvalue of 2 A^T A.
  double lipschitz() const;
  /// sum_i x_max_i^2.
  double diameter2() const;
  double mean_k() const noexcept { return 0.5 * (k_lo_ + k_hi_); }

  const CapacityProjection& projection() const noexcept { return proj_; }
  const Matrix& A() const noexcept { return A_; }
  const Vector& C() const noexcept { return C_; }
  double k_lo() const noexcept { return k_lo_; }
  double k_hi() const noexcept { return k_hi_; }

 private:
  Matrix A_;
  Vector C_;
  double k_lo_;
  double k_hi_;
  CapacityProjection proj_;
};

}  // namespace adaptsa
