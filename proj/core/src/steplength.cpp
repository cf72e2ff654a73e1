#include "adaptsa/steplength.hpp"

#include <cmath>
#include <numbers>

#include "adaptsa/bounds.hpp"

namespace adaptsa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

// ---------------------------------------------------------------------------
// Harmonic

double hsa_gamma(std::uint64_t k, double alpha) {
  if (k == 0) throw InvalidInput("hsa_gamma: k must be at least 1");
  if (!positive_finite(alpha)) throw InvalidInput("hsa_gamma: alpha <= 0");
  return alpha / static_cast<double>(k);
}

HsaPolicy::HsaPolicy(double alpha) : alpha_(alpha) {
  if (!positive_finite(alpha)) throw ConfigError("HsaPolicy: alpha <= 0");
}

Step HsaPolicy::next() {
  const double g = k_ == 0 ? alpha_ : hsa_gamma(k_, alpha_);
  ++k_;
  return {g, kNaN};
}

std::unique_ptr<SteplengthPolicy> HsaPolicy::clone() const {
  return std::make_unique<HsaPolicy>(*this);
}

// ---------------------------------------------------------------------------
// Recursive

double rsa_init(double eta, double nu2, double e0, double L) {
  if (!positive_finite(eta) || !positive_finite(nu2)) {
    throw InvalidInput("rsa_init: eta and nu2 must be positive");
  }
  if (!positive_finite(e0)) throw InvalidInput("rsa_init: e0 must be positive");
  if (!(L > 0.0)) throw InvalidInput("rsa_init: L must be positive");
  const double gamma0 = eta * e0 / (2.0 * nu2);
  if (std::isfinite(L) && gamma0 * L > 1.0 + 1e-12) {
    throw ConfigError(
        "rsa_init: eta*e0/(2 nu2) exceeds 1/L; scale e0 down by a factor "
        "beta < 1 (beta <= " +
        std::to_string(1.0 / (gamma0 * L)) + ")");
  }
  return gamma0;
}

double rsa_next(double gamma_prev, double c) {
  if (!positive_finite(c)) throw InvalidInput("rsa_next: c must be positive");
  if (!positive_finite(gamma_prev)) {
    throw InvalidInput("rsa_next: gamma must be positive");
  }
  if (!(c * gamma_prev < 1.0)) {
    throw DomainError("rsa_next: gamma must be below 1/c");
  }
  return gamma_prev * (1.0 - c * gamma_prev);
}

double rsa_nonsmooth_init(double eta, double D, double M) {
  if (!positive_finite(eta) || !positive_finite(D) || !positive_finite(M)) {
    throw InvalidInput("rsa_nonsmooth_init: inputs must be positive");
  }
  const double gamma0 = eta * D * D / (M * M);
  if (!(gamma0 < 0.5)) {
    throw ConfigError("rsa_nonsmooth_init: eta*D^2/M^2 must be below 1/2");
  }
  return gamma0;
}

RsaPolicy::RsaPolicy(double gamma0, double c, double bound_scale)
    : gamma0_(gamma0), c_(c), bound_scale_(bound_scale), gamma_(gamma0) {
  if (!positive_finite(c)) throw ConfigError("RsaPolicy: c must be positive");
  if (!positive_finite(gamma0) || !(gamma0 * c < 1.0)) {
    throw ConfigError("RsaPolicy: gamma0 must lie in (0, 1/c)");
  }
  if (!(bound_scale >= 0.0)) {
    throw ConfigError("RsaPolicy: bound scale must be nonnegative");
  }
}

RsaPolicy RsaPolicy::smooth(double eta, double nu2, double e0, double L) {
  return RsaPolicy(rsa_init(eta, nu2, e0, L), 0.5 * eta, 2.0 * nu2 / eta);
}

RsaPolicy RsaPolicy::nonsmooth(double eta, double D, double M) {
  return RsaPolicy(rsa_nonsmooth_init(eta, D, M), eta, M * M / eta);
}

Step RsaPolicy::next() {
  if (started_) {
    if (!clamped_) {
      const double g = rsa_next(gamma_, c_);
      if (g < kGammaFloor) {
        gamma_ = kGammaFloor;
        clamped_ = true;
      } else {
        gamma_ = g;
      }
    }
  }
  started_ = true;
  return {gamma_, bound_scale_ * gamma_};
}

std::unique_ptr<SteplengthPolicy> RsaPolicy::clone() const {
  return std::make_unique<RsaPolicy>(*this);
}

// ---------------------------------------------------------------------------
// Cascading

void CsaParams::validate() const {
  if (!positive_finite(eta) || !positive_finite(L) || eta > L) {
    throw ConfigError("CsaParams: need 0 < eta <= L");
  }
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ConfigError("CsaParams: theta must lie in (0, 1)");
  }
  if (!(gamma_init > 0.0 && gamma_init < 2.0 / L)) {
    throw ConfigError("CsaParams: gamma_init must lie in (0, 2/L)");
  }
  if (!positive_finite(nu2) || !positive_finite(D2)) {
    throw ConfigError("CsaParams: nu2 and D2 must be positive");
  }
}

double CsaState::cumulative_product() const {
  return std::exp(log_cumulative_product);
}

namespace {

// Largest k >= 0 with log_x + k*log_q > log_p, or -1 if none.
std::int64_t largest_k(double log_x, double log_q, double log_p) {
  auto holds = [&](std::int64_t k) {
    return (k == 0 ? log_x : log_x + static_cast<double>(k) * log_q) > log_p;
  };
  if (!holds(0)) return -1;
  if (std::isinf(log_q)) return 0;
  const double r = (log_x - log_p) / -log_q;
  if (!(r < 9e15)) throw NumericalFailure("csa: regime length overflow", r);
  auto k = static_cast<std::int64_t>(std::ceil(r)) - 1;
  if (k < 0) k = 0;
  while (holds(k + 1)) ++k;
  while (k > 0 && !holds(k)) --k;
  return k;
}

double log_persistent(double gamma, const CsaParams& p) {
  return std::log(persistent_error(gamma, p.eta, p.L, p.nu2));
}

CsaRegime to_regime(const CsaState& s) {
  return {s.t, s.gamma, s.q, s.K, s.regime_start, s.log_cumulative_product,
          s.forced};
}

}  // namespace

CsaPhase1 csa_phase1(const CsaParams& params) {
  params.validate();
  const double log_d2 = std::log(params.D2);
  double gamma = params.gamma_init;
  for (int j = 0; j < 100000; ++j) {
    if (log_d2 > log_persistent(gamma, params)) {
      const std::int64_t k = largest_k(
          log_d2, log_q_factor(gamma, params.eta, params.L),
          log_persistent(gamma, params));
      return {j, gamma, k};
    }
    gamma *= params.theta;
  }
  throw NumericalFailure("csa_phase1: no admissible ell", gamma);
}

std::int64_t csa_regime_length(const CsaState& state, const CsaParams& params,
                               bool* forced) {
  const double log_x = state.t * std::numbers::ln2 +
                       state.log_cumulative_product + std::log(params.D2);
  const std::int64_t k =
      largest_k(log_x, log_q_factor(state.gamma, params.eta, params.L),
                log_persistent(state.gamma, params));
  if (forced != nullptr) *forced = k < 1;
  return k < 1 ? 1 : k;
}

CsaState csa_initial_state(const CsaParams& params) {
  const CsaPhase1 p1 = csa_phase1(params);
  CsaState s;
  s.t = 0;
  s.gamma = p1.gamma0;
  s.q = q_factor(s.gamma, params.eta, params.L);
  s.K = csa_regime_length(s, params, &s.forced);
  return s;
}

CsaState csa_advance(const CsaState& s, const CsaParams& params) {
  CsaState n;
  n.t = s.t + 1;
  n.gamma = params.theta * s.gamma;
  n.q = q_factor(n.gamma, params.eta, params.L);
  n.log_cumulative_product =
      s.log_cumulative_product +
      static_cast<double>(s.K) * log_q_factor(s.gamma, params.eta, params.L);
  n.regime_start = s.regime_start + s.K;
  n.iteration_in_regime = 0;
  n.K = csa_regime_length(n, params, &n.forced);
  return n;
}

std::pair<double, CsaState> csa_gamma(std::int64_t k, const CsaState& state,
                                      const CsaParams& params) {
  if (k != state.regime_start + state.iteration_in_regime) {
    throw InvalidInput("csa_gamma: state does not match iteration index");
  }
  CsaState next = state;
  ++next.iteration_in_regime;
  if (next.iteration_in_regime >= next.K) next = csa_advance(next, params);
  return {state.gamma, next};
}

std::vector<CsaRegime> csa_schedule(const CsaParams& params, std::int64_t N) {
  if (N < 0) throw InvalidInput("csa_schedule: negative N");
  std::vector<CsaRegime> out;
  CsaState s = csa_initial_state(params);
  out.push_back(to_regime(s));
  while (s.regime_start + s.K < N) {
    s = csa_advance(s, params);
    out.push_back(to_regime(s));
  }
  return out;
}

CsaPolicy::CsaPolicy(CsaParams params)
    : params_(params), state_(csa_initial_state(params)) {}

Step CsaPolicy::next() {
  const BoundParams bp{params_.eta, params_.L, params_.nu2, params_.D2,
                       params_.D2};
  const double bound =
      csa_bound_at(to_regime(state_), state_.iteration_in_regime, bp);
  auto [gamma, next_state] = csa_gamma(k_, state_, params_);
  state_ = next_state;
  ++k_;
  return {gamma, bound};
}

std::unique_ptr<SteplengthPolicy> CsaPolicy::clone() const {
  return std::make_unique<CsaPolicy>(*this);
}

}  // namespace adaptsa
