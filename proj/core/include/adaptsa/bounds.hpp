#pragma once

#include <cstdint>
#include <vector>

#include "adaptsa/steplength.hpp"

namespace adaptsa {

struct BoundParams {
  double eta;
  double L;
  double nu2;
  double e0;
  double D2;
};

/// eta*gamma*(2 - gamma*L), i.e. 1 - q(gamma), without cancellation.
double contraction_gap(double gamma, double eta, double L);

/// q(gamma) = 1 - eta*gamma*(2 - gamma*L) for gamma in (0, 2/L).
double q_factor(double gamma, double eta, double L);

/// ln q(gamma), accurate for small gamma.
double log_q_factor(double gamma, double eta, double L);

/// (1 - eta*gamma) e_prev + gamma^2 nu2.
double e_k_recursion(double e_prev, double gamma_prev, double eta, double nu2);

/// Steady-state error gamma^2 nu2/(1 - q) = gamma nu2/(eta (2 - gamma L)).
double persistent_error(double gamma, double eta, double L, double nu2);

struct ErrorSplit {
  double transient;
  double persistent;
};

/// Transient q^k e0 and persistent parts of the constant-step bound.
ErrorSplit transient_persistent(std::int64_t k, double gamma,
                                const BoundParams& params);

/// Bound on E||x_k - x*||^2 at offset `k_in_regime` inside `regime`.
double csa_bound_at(const CsaRegime& regime, std::int64_t k_in_regime,
                    const BoundParams& params);

/// Per-iteration CSA bound for k = 0..N-1.
std::vector<double> csa_bound_trajectory(const std::vector<CsaRegime>& schedule,
                                         const BoundParams& params,
                                         std::int64_t N);

/// (2 nu2/eta) gamma_k for each entry.
std::vector<double> rsa_bound_trajectory(const std::vector<double>& gammas,
                                         double eta, double nu2);

/// (M^2/eta) gamma_k for each entry.
std::vector<double> rsa_nonsmooth_bound_trajectory(
    const std::vector<double>& gammas, double eta, double M2);

}  // namespace adaptsa
