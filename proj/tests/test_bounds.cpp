#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "adaptsa/bounds.hpp"
#include "adaptsa/steplength.hpp"

namespace adaptsa {
namespace {

TEST(QFactor, Examples) {
  EXPECT_DOUBLE_EQ(q_factor(0.5, 1.0, 2.0), 0.5);
  EXPECT_NEAR(q_factor(1e-12, 1.0, 2.0), 1.0, 1e-11);
  for (double L : {1.5, 3.0, 10.0}) {
    for (double eta : {0.1, 0.7, 1.0}) {
      EXPECT_NEAR(q_factor(1.0 / L, eta, L), 1.0 - eta / L, 1e-15);
    }
  }
}

TEST(QFactor, VertexIsTheMinimum) {
  const double eta = 0.3, L = 2.5;
  const double qmin = q_factor(1.0 / L, eta, L);
  for (int i = 1; i < 1000; ++i) {
    const double g = 2.0 / L * i / 1000.0;
    EXPECT_GE(q_factor(g, eta, L), qmin - 1e-15);
  }
}

TEST(QFactor, DomainErrors) {
  EXPECT_THROW(q_factor(0.0, 1.0, 2.0), DomainError);
  EXPECT_THROW(q_factor(1.0, 1.0, 2.0), DomainError);
  EXPECT_THROW(q_factor(-0.1, 1.0, 2.0), DomainError);
  EXPECT_THROW(q_factor(0.1, 3.0, 2.0), DomainError);
}

TEST(QRatio, BoundedAndTendsToTwoEta) {
  for (double eta : {0.2, 0.5, 0.9}) {
    const double L = 1.0;
    const double cap = 2.0 * eta * L / (L - eta);
    for (int i = 1; i <= 1000; ++i) {
      const double g = 2.0 / L * i / 1001.0;
      const double r = -log_q_factor(g, eta, L) / g;
      EXPECT_GT(r, 0.0);
      EXPECT_LE(r, cap * (1.0 + 1e-12));
    }
    const double r0 = -log_q_factor(1e-8, eta, L) / 1e-8;
    EXPECT_NEAR(r0 / (2.0 * eta), 1.0, 1e-4);
  }
}

TEST(ErrorRecursion, Examples) {
  EXPECT_DOUBLE_EQ(e_k_recursion(1.0, 0.25, 0.5, 1.0), 0.9375);
  EXPECT_DOUBLE_EQ(e_k_recursion(0.7, 0.0, 0.5, 1.0), 0.7);
  EXPECT_THROW(e_k_recursion(1.0, 2.0, 0.5, 1.0), DomainError);
}

TEST(ErrorRecursion, OptimalSequenceMatchesBound) {
  const double eta = 0.5, nu2 = 1.0, e0 = 1.0;
  double g = rsa_init(eta, nu2, e0);
  double e = e0;
  for (int k = 0; k < 200; ++k) {
    EXPECT_NEAR(e, 2.0 * nu2 / eta * g, 1e-14);
    e = e_k_recursion(e, g, eta, nu2);
    g = rsa_next(g, 0.5 * eta);
  }
}

TEST(TransientPersistent, Examples) {
  const BoundParams p{1.0, 2.0, 1.0, 0.8, 1.0};
  const ErrorSplit s0 = transient_persistent(0, 0.5, p);
  EXPECT_DOUBLE_EQ(s0.transient, 0.8);
  EXPECT_DOUBLE_EQ(s0.persistent, 0.5);
  const double q = q_factor(0.5, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(0.25 * 1.0 / (1.0 - q), 0.5);
  EXPECT_DOUBLE_EQ(transient_persistent(3, 0.5, p).transient, 0.8 * 0.125);
}

TEST(TransientPersistent, PersistentIncreasesInGamma) {
  const double eta = 0.4, L = 3.0, nu2 = 2.0;
  double prev = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const double g = 2.0 / L * i / 1000.0;
    const double p = persistent_error(g, eta, L, nu2);
    EXPECT_GT(p, prev);
    prev = p;
  }
}

TEST(TransientPersistent, MatchesDirectConstantStepRecursion) {
  const BoundParams p{0.6, 2.0, 1.5, 3.0, 3.0};
  for (double g : {0.05, 0.3, 0.5, 0.9}) {
    const double q = 1.0 - p.eta * g * (2.0 - g * p.L);
    double E = p.e0;
    double geo = 0.0;  // sum_{i<k} q^i
    double qk = 1.0;
    for (int k = 0; k < 300; ++k) {
      const ErrorSplit s = transient_persistent(k, g, p);
      const double closed = qk * p.e0 + g * g * p.nu2 * geo;
      EXPECT_NEAR(E, closed, 1e-12 * closed);
      EXPECT_LE(E, (s.transient + s.persistent) * (1.0 + 1e-12));
      E = q * E + g * g * p.nu2;
      geo += qk;
      qk *= q;
    }
  }
}

TEST(CsaBound, RegimeZeroSpecialization) {
  const CsaParams c{0.25, 0.5, 1.0, 4.0, 1.0, 2.0};
  const BoundParams b{c.eta, c.L, c.nu2, c.D2, c.D2};
  const auto sched = csa_schedule(c, 2000);
  const auto traj = csa_bound_trajectory(sched, b, 2000);
  ASSERT_EQ(traj.size(), 2000u);
  const CsaRegime& r0 = sched.front();
  const double q0 = 1.0 - c.eta * r0.gamma * (2.0 - r0.gamma * c.L);
  const double p0 = r0.gamma * r0.gamma * c.nu2 / (1.0 - q0);
  for (std::int64_t k = 0; k < r0.K; ++k) {
    EXPECT_NEAR(traj[k], std::pow(q0, k) * c.D2 + p0, 1e-12);
  }
}

TEST(CsaBound, BoundaryIdentityAndPersistentDrop) {
  const CsaParams c{0.2, 0.5, 0.5, 3.0, 1.2, 2.0};
  const BoundParams b{c.eta, c.L, c.nu2, c.D2, c.D2};
  const auto sched = csa_schedule(c, 200000);
  ASSERT_GE(sched.size(), 5u);
  double prev_persistent = INFINITY;
  for (const CsaRegime& r : sched) {
    const double pers = persistent_error(r.gamma, c.eta, c.L, c.nu2);
    EXPECT_LT(pers, prev_persistent);
    prev_persistent = pers;
    if (r.forced) continue;
    const double end_value = csa_bound_at(r, r.K, b);
    const double rhs = std::exp((r.t + 1) * std::log(2.0) +
                                r.log_cumulative_product +
                                r.K * std::log(r.q) + std::log(c.D2));
    EXPECT_LE(end_value, rhs * (1.0 + 1e-12)) << "regime " << r.t;
  }
}

TEST(CsaBound, FinitePositiveAndVanishingAtBoundaries) {
  const CsaParams c{0.25, 0.5, 1.0, 4.0, 1.0, 2.0};
  const BoundParams b{c.eta, c.L, c.nu2, c.D2, c.D2};
  CsaState s = csa_initial_state(c);
  double first = 0.0;
  double last = 0.0;
  for (int t = 0; t < 40; ++t) {
    const CsaRegime r{s.t, s.gamma, s.q, s.K, s.regime_start,
                      s.log_cumulative_product, s.forced};
    const double v = csa_bound_at(r, 0, b);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
    if (t == 0) first = v;
    last = v;
    s = csa_advance(s, c);
  }
  EXPECT_LT(last, 1e-8 * first);
}

TEST(RsaBound, Examples) {
  const auto smooth = rsa_bound_trajectory({0.25, 0.234375}, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(smooth[0], 1.0);
  EXPECT_DOUBLE_EQ(smooth[1], 0.9375);
  EXPECT_DOUBLE_EQ(rsa_nonsmooth_bound_trajectory({0.125}, 1.0, 16.0)[0], 2.0);

  std::vector<double> gammas{rsa_init(0.5, 1.0, 1.0)};
  for (int i = 0; i < 100; ++i) gammas.push_back(rsa_next(gammas.back(), 0.25));
  const auto b = rsa_bound_trajectory(gammas, 0.5, 1.0);
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LT(b[i], b[i - 1]);
}

}  // namespace
}  // namespace adaptsa
