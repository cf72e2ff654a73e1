#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adaptsa/types.hpp"

namespace adaptsa {

/// Smallest stepsize a policy will emit. Reaching it sets clamped().
inline constexpr double kGammaFloor = 1e-300;

/// One emitted step: the stepsize for iteration k and the theoretical bound
/// on E||x_k - x*||^2 (NaN when the scheme carries no bound).
struct Step {
  double gamma;
  double bound;
};

/// Stateful producer of stepsizes. Call next() once per iteration, starting
/// at k = 0.
class SteplengthPolicy {
 public:
  virtual ~SteplengthPolicy() = default;
  virtual Step next() = 0;
  virtual bool clamped() const { return false; }
  virtual std::string name() const = 0;
  virtual std::unique_ptr<SteplengthPolicy> clone() const = 0;
};

// ---------------------------------------------------------------------------
// Harmonic

/// alpha / k for k >= 1.
double hsa_gamma(std::uint64_t k, double alpha);

/// Harmonic policy; iteration 0 uses alpha.
class HsaPolicy final : public SteplengthPolicy {
 public:
  explicit HsaPolicy(double alpha);
  Step next() override;
  std::string name() const override { return "hsa"; }
  std::unique_ptr<SteplengthPolicy> clone() const override;
  double alpha() const noexcept { return alpha_; }

 private:
  double alpha_;
  std::uint64_t k_ = 0;
};

// ---------------------------------------------------------------------------
// Recursive

/// Optimal initial step eta*e0/(2 nu2). Throws ConfigError when the result
/// exceeds 1/L; a smaller e0 fixes that.
double rsa_init(double eta, double nu2, double e0,
                double L = std::numeric_limits<double>::infinity());

/// gamma_prev * (1 - c*gamma_prev), for 0 < gamma_prev < 1/c.
double rsa_next(double gamma_prev, double c);

/// Nonsmooth initial step eta*D^2/M^2, which must be below 1/2.
double rsa_nonsmooth_init(double eta, double D, double M);

/// gamma_k = gamma_{k-1}(1 - c gamma_{k-1}) with bound bound_scale*gamma_k.
class RsaPolicy final : public SteplengthPolicy {
 public:
  RsaPolicy(double gamma0, double c, double bound_scale);

  /// Smooth scheme: c = eta/2, bound (2 nu2/eta) gamma_k.
  static RsaPolicy smooth(double eta, double nu2, double e0, double L);
  /// Nonsmooth scheme: c = eta, bound (M^2/eta) gamma_k.
  static RsaPolicy nonsmooth(double eta, double D, double M);

  Step next() override;
  bool clamped() const override { return clamped_; }
  std::string name() const override { return "rsa"; }
  std::unique_ptr<SteplengthPolicy> clone() const override;

  double gamma0() const noexcept { return gamma0_; }
  double c() const noexcept { return c_; }

 private:
  double gamma0_;
  double c_;
  double bound_scale_;
  double gamma_;
  bool started_ = false;
  bool clamped_ = false;
};

// ---------------------------------------------------------------------------
// Cascading

struct CsaParams {
  double gamma_init;
  double theta;
  double eta;
  double L;
  double nu2;
  double D2;

  /// Throws ConfigError on any violated constraint.
  void validate() const;
};

struct CsaPhase1 {
  int ell;
  double gamma0;
  std::int64_t K0;
};

struct CsaState {
  int t = 0;
  double gamma = 0.0;
  double q = 0.0;
  std::int64_t K = 0;
  /// ln of prod_{j<t} q_j^{K_j}.
  double log_cumulative_product = 0.0;
  std::int64_t iteration_in_regime = 0;
  /// Global index of the first iteration of regime t.
  std::int64_t regime_start = 0;
  /// True when K was raised to the minimum length of one.
  bool forced = false;

  double cumulative_product() const;
};

/// One regime of a CSA schedule, as consumed by the bound trajectory.
struct CsaRegime {
  int t;
  double gamma;
  double q;
  std::int64_t K;
  std::int64_t start;
  double log_cumulative_product;
  bool forced;
};

CsaPhase1 csa_phase1(const CsaParams& params);

/// K_t for the state's (t, gamma, q, log_cumulative_product): the largest
/// k >= 0 with q^k 2^t prod D^2 > gamma^2 nu2/(1-q), raised to at least 1.
/// `forced` reports whether the raise to 1 was needed.
std::int64_t csa_regime_length(const CsaState& state, const CsaParams& params,
                               bool* forced = nullptr);

/// Initial state (regime 0) after the initial step search.
CsaState csa_initial_state(const CsaParams& params);

/// State at the start of regime t + 1.
CsaState csa_advance(const CsaState& state, const CsaParams& params);

/// Stepsize for global iteration k and the state to use for k + 1.
std::pair<double, CsaState> csa_gamma(std::int64_t k, const CsaState& state,
                                      const CsaParams& params);

/// Regimes covering iterations 0..N-1.
std::vector<CsaRegime> csa_schedule(const CsaParams& params, std::int64_t N);

class CsaPolicy final : public SteplengthPolicy {
 public:
  explicit CsaPolicy(CsaParams params);
  Step next() override;
  std::string name() const override { return "csa"; }
  std::unique_ptr<SteplengthPolicy> clone() const override;
  const CsaState& state() const noexcept { return state_; }
  const CsaParams& params() const noexcept { return params_; }

 private:
  CsaParams params_;
  CsaState state_;
  std::int64_t k_ = 0;
};

}  // namespace adaptsa
