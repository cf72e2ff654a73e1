#include <gtest/gtest.h>

#include "adaptsa/projections.hpp"
#include "adaptsa/rng.hpp"

namespace adaptsa {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(Simplex, Examples) {
  EXPECT_TRUE(project_simplex(vec({0.5, 0.5})).isApprox(vec({0.5, 0.5})));
  EXPECT_TRUE(project_simplex(vec({2.0, 0.0})).isApprox(vec({1.0, 0.0})));
  EXPECT_TRUE(project_simplex(vec({0.0, 0.0})).isApprox(vec({0.5, 0.5})));
}

TEST(Simplex, FeasibleIdempotentAndOptimal) {
  Rng rng(1);
  const SimplexProjection proj;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(12));
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = 3.0 * rng.normal();
    const Vector p = proj.project(v);
    ASSERT_TRUE(proj.contains(p, 1e-12));
    ASSERT_NEAR(p.sum(), 1.0, 1e-12);
    ASSERT_GE(p.minCoeff(), 0.0);
    ASSERT_LT((proj.project(p) - p).norm(), 1e-12);
    // Variational inequality: (v - p)^T (y - p) <= 0 for vertices y.
    for (Eigen::Index j = 0; j < n; ++j) {
      Vector y = Vector::Zero(n);
      y(j) = 1.0;
      ASSERT_LE((v - p).dot(y - p), 1e-10);
    }
  }
}

TEST(Identity, PassesThrough) {
  const IdentityProjection id;
  const Vector v = vec({-1.0, 2.5, 3.0});
  EXPECT_EQ(id.project(v), v);
  EXPECT_TRUE(id.contains(v, 0.0));
}

TEST(Capacity, OneDimensionalClip) {
  Matrix A(1, 1);
  A << 1.0;
  const Vector C = vec({0.5});
  EXPECT_NEAR(project_capacity(vec({2.0}), A, C)(0), 0.5, 1e-10);
  EXPECT_NEAR(project_capacity(vec({-3.0}), A, C)(0), 0.0, 1e-10);
  EXPECT_NEAR(project_capacity(vec({0.2}), A, C)(0), 0.2, 1e-12);
}

TEST(Capacity, InteriorPointIsFixed) {
  Matrix A(2, 3);
  A << 1, 1, 0, 0, 1, 1;
  const Vector C = vec({1.0, 1.0});
  const Vector x = vec({0.2, 0.3, 0.1});
  EXPECT_LT((project_capacity(x, A, C) - x).norm(), 1e-12);
}

TEST(Capacity, RandomFeasibilityAudit) {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index links = 1 + static_cast<Eigen::Index>(rng.index(6));
    const Eigen::Index users = 1 + static_cast<Eigen::Index>(rng.index(6));
    Matrix A = Matrix::Zero(links, users);
    for (Eigen::Index i = 0; i < links; ++i) {
      for (Eigen::Index j = 0; j < users; ++j) A(i, j) = rng.uniform() < 0.5;
    }
    Vector C(links);
    for (Eigen::Index i = 0; i < links; ++i) C(i) = rng.uniform(0.05, 1.0);
    Vector v(users);
    for (Eigen::Index j = 0; j < users; ++j) v(j) = rng.normal();
    const Vector p = project_capacity(v, A, C);
    ASSERT_LE(((A * p) - C).maxCoeff(), 1e-8) << "trial " << trial;
    ASSERT_GE(p.minCoeff(), -1e-12) << "trial " << trial;
    const Vector pp = project_capacity(p, A, C);
    ASSERT_LT((pp - p).norm(), 1e-7);
  }
}

TEST(Capacity, MatchesSimplexLikeCorner) {
  // Single link covering both users: projection onto {x >= 0, x1 + x2 <= 1}.
  Matrix A(1, 2);
  A << 1, 1;
  const Vector p = project_capacity(vec({2.0, 1.0}), A, vec({1.0}));
  EXPECT_NEAR(p(0), 1.0, 1e-9);
  EXPECT_NEAR(p(1), 0.0, 1e-9);
}

TEST(Capacity, CapReportsFailure) {
  Matrix A(2, 2);
  A << 1, 1, 1, 0;
  const DykstraOptions tight{1e-16, 1};
  EXPECT_THROW(project_capacity(vec({5.0, 5.0}), A, vec({1.0, 0.3}), tight),
               NumericalFailure);
}

}  // namespace
}  // namespace adaptsa
