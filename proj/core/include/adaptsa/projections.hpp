#pragma once

#include "adaptsa/types.hpp"

namespace adaptsa {

/// Euclidean projection onto a closed convex set.
class Projection {
 public:
  virtual ~Projection() = default;
  virtual Vector project(const Vector& v) const = 0;
  virtual bool contains(const Vector& x, double tol) const = 0;
};

/// Projection onto the unit simplex {x >= 0, sum x = 1} by sort and threshold.
Vector project_simplex(const Vector& v);

struct DykstraOptions {
  double tol = 1e-10;
  int max_cycles = 200000;
};

/// Projection onto {x >= 0, A x <= C} by Dykstra's alternating projections.
/// Throws NumericalFailure if the cycle cap is reached.
Vector project_capacity(const Vector& v, const Matrix& A, const Vector& C,
                        const DykstraOptions& opts = {});

class IdentityProjection final : public Projection {
 public:
  Vector project(const Vector& v) const override;
  bool contains(const Vector& x, double tol) const override;
};

class SimplexProjection final : public Projection {
 public:
  Vector project(const Vector& v) const override;
  bool contains(const Vector& x, double tol) const override;
};

class CapacityProjection final : public Projection {
 public:
  CapacityProjection(Matrix A, Vector C, DykstraOptions opts = {});
  Vector project(const Vector& v) const override;
  bool contains(const Vector& x, double tol) const override;

  const Matrix& links() const noexcept { return A_; }
  const Vector& capacity() const noexcept { return C_; }

 private:
  Matrix A_;
  Vector C_;
  DykstraOptions opts_;
};

}  // namespace adaptsa
