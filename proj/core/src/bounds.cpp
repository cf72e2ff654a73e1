#include "adaptsa/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace adaptsa {

namespace {

void check_step_domain(double gamma, double eta, double L, const char* who) {
  if (!(eta > 0.0) || !(L >= eta) || !std::isfinite(L)) {
    throw DomainError(std::string(who) + ": need 0 < eta <= L");
  }
  if (!(gamma > 0.0) || !(gamma < 2.0 / L)) {
    throw DomainError(std::string(who) + ": gamma outside (0, 2/L)");
  }
}

}  // namespace

double contraction_gap(double gamma, double eta, double L) {
  check_step_domain(gamma, eta, L, "contraction_gap");
  return eta * gamma * (2.0 - gamma * L);
}

double q_factor(double gamma, double eta, double L) {
  return 1.0 - contraction_gap(gamma, eta, L);
}

double log_q_factor(double gamma, double eta, double L) {
  return std::log1p(-contraction_gap(gamma, eta, L));
}

double e_k_recursion(double e_prev, double gamma_prev, double eta,
                     double nu2) {
  if (!(e_prev >= 0.0) || !(gamma_prev >= 0.0) || !(nu2 >= 0.0) ||
      !(eta > 0.0)) {
    throw InvalidInput("e_k_recursion: negative or non-finite input");
  }
  if (!(eta * gamma_prev < 1.0)) {
    throw DomainError("e_k_recursion: eta*gamma must be below 1");
  }
  return (1.0 - eta * gamma_prev) * e_prev + gamma_prev * gamma_prev * nu2;
}

double persistent_error(double gamma, double eta, double L, double nu2) {
  check_step_domain(gamma, eta, L, "persistent_error");
  return gamma * nu2 / (eta * (2.0 - gamma * L));
}

ErrorSplit transient_persistent(std::int64_t k, double gamma,
                                const BoundParams& params) {
  if (k < 0) throw InvalidInput("transient_persistent: negative k");
  const double lq = log_q_factor(gamma, params.eta, params.L);
  const double transient =
      k == 0 ? params.e0
             : std::exp(static_cast<double>(k) * lq + std::log(params.e0));
  return {transient, persistent_error(gamma, params.eta, params.L, params.nu2)};
}

double csa_bound_at(const CsaRegime& regime, std::int64_t k_in_regime,
                    const BoundParams& params) {
  const double lq = log_q_factor(regime.gamma, params.eta, params.L);
  double log_transient = regime.t * std::numbers::ln2 +
                         regime.log_cumulative_product + std::log(params.D2);
  if (k_in_regime > 0) log_transient += static_cast<double>(k_in_regime) * lq;
  return std::exp(log_transient) +
         persistent_error(regime.gamma, params.eta, params.L, params.nu2);
}

std::vector<double> csa_bound_trajectory(const std::vector<CsaRegime>& schedule,
                                         const BoundParams& params,
                                         std::int64_t N) {
  if (N < 0) throw InvalidInput("csa_bound_trajectory: negative N");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(N));
  for (const CsaRegime& r : schedule) {
    for (std::int64_t i = 0; i < r.K && r.start + i < N; ++i) {
      out.push_back(csa_bound_at(r, i, params));
    }
    if (static_cast<std::int64_t>(out.size()) >= N) break;
  }
  if (static_cast<std::int64_t>(out.size()) != N) {
    throw InvalidInput("csa_bound_trajectory: schedule shorter than N");
  }
  return out;
}

std::vector<double> rsa_bound_trajectory(const std::vector<double>& gammas,
                                         double eta, double nu2) {
  std::vector<double> out;
  out.reserve(gammas.size());
  const double scale = 2.0 * nu2 / eta;
  for (double g : gammas) out.push_back(scale * g);
  return out;
}

std::vector<double> rsa_nonsmooth_bound_trajectory(
    const std::vector<double>& gammas, double eta, double M2) {
  std::vector<double> out;
  out.reserve(gammas.size());
  const double scale = M2 / eta;
  for (double g : gammas) out.push_back(scale * g);
  return out;
}

}  // namespace adaptsa
