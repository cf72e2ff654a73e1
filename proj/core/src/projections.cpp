#include "adaptsa/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace adaptsa {

namespace {

void require_finite(const Vector& v, const char* who) {
  if (!all_finite(v)) {
    throw InvalidInput(std::string(who) + ": non-finite coordinate");
  }
}

}  // namespace

Vector project_simplex(const Vector& v) {
  require_finite(v, "project_simplex");
  const Eigen::Index n = v.size();
  if (n == 0) throw InvalidInput("project_simplex: empty vector");

  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

Vector project_capacity(const Vector& v, const Matrix& A, const Vector& C,
                        const DykstraOptions& opts) {
  require_finite(v, "project_capacity");
  if (A.cols() != v.size() || A.rows() != C.size()) {
    throw InvalidInput("project_capacity: dimension mismatch");
  }
  const Eigen::Index m = A.rows();
  const Vector row_norm2 = A.rowwise().squaredNorm();

  // Sets 0..m-1 are the link halfspaces, set m is the nonnegative orthant.
  Vector x = v;
  std::vector<Vector> incr(m + 1, Vector::Zero(v.size()));
  double change = 0.0;
  double violation = 0.0;
  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    const Vector start = x;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vector y = x + incr[i];
      const double slack = A.row(i).dot(y) - C(i);
      if (slack > 0.0 && row_norm2(i) > 0.0) {
        x = y - (slack / row_norm2(i)) * A.row(i).transpose();
      } else {
        x = y;
      }
      incr[i] = y - x;
    }
    const Vector y = x + incr[m];
    x = y.cwiseMax(0.0);
    incr[m] = y - x;

    change = (x - start).norm();
    violation = std::max((A * x - C).maxCoeff(), 0.0);
    if (change < opts.tol && violation < opts.tol) return x;
  }
  throw NumericalFailure("project_capacity: Dykstra did not converge",
                         std::max(change, violation));
}

Vector IdentityProjection::project(const Vector& v) const {
  require_finite(v, "IdentityProjection");
  return v;
}

bool IdentityProjection::contains(const Vector& x, double) const {
  return all_finite(x);
}

Vector SimplexProjection::project(const Vector& v) const {
  return project_simplex(v);
}

bool SimplexProjection::contains(const Vector& x, double tol) const {
  return all_finite(x) && x.size() > 0 && x.minCoeff() >= -tol &&
         std::abs(x.sum() - 1.0) <= tol * std::max<double>(1.0, x.size());
}

CapacityProjection::CapacityProjection(Matrix A, Vector C, DykstraOptions opts)
    : A_(std::move(A)), C_(std::move(C)), opts_(opts) {
  if (A_.rows() != C_.size()) {
    throw InvalidInput("CapacityProjection: links and capacities disagree");
  }
  if (C_.size() > 0 && C_.minCoeff() < 0.0) {
    throw InvalidInput("CapacityProjection: negative capacity");
  }
}

Vector CapacityProjection::project(const Vector& v) const {
  return project_capacity(v, A_, C_, opts_);
}

bool CapacityProjection::contains(const Vector& x, double tol) const {
  if (!all_finite(x) || x.size() != A_.cols()) return false;
  if (x.minCoeff() < -tol) return false;
  return A_.rows() == 0 || (A_ * x - C_).maxCoeff() <= tol;
}

}  // namespace adaptsa
