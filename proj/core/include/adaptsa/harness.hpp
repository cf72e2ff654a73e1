#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adaptsa/problems.hpp"
#include "adaptsa/saa.hpp"
#include "adaptsa/sa_core.hpp"
#include "adaptsa/steplength.hpp"

namespace adaptsa {

enum class ProblemKind { kUtility, kBimatrix, kNetwork };
enum class Scheme { kHsa, kRsa, kCsa };

std::string to_string(ProblemKind p);
std::string to_string(Scheme s);
ProblemKind parse_problem(const std::string& s);
Scheme parse_scheme(const std::string& s);

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kUtility;
  Scheme scheme = Scheme::kRsa;
  int n = 20;
  std::int64_t iters = 4000;
  double eta = 0.5;
  double eps = 0.5;
  double theta = 0.5;
  double alpha = 1.0;
  /// RSA initial step; derived from eta, nu2 and e0 when unset.
  std::optional<double> gamma0;
  int replications = 50;
  std::uint64_t seed = 1;
  std::string out;

  std::int64_t saa_samples = 100000;
  int pieces = 10;
  int capacity = 3;
  int threads = 0;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// Constants the schemes are configured with.
struct ProblemConstants {
  double eta = 0.0;
  double L = 0.0;
  double nu2 = 0.0;
  double D2 = 0.0;
  /// Subgradient bound of the nonsmooth part; NaN when not used.
  double C = 0.0;
};

/// Problem instance, starting point, constants and shared reference.
/// Depends only on the problem-level fields of the config, so one setup can
/// serve every scheme.
class ProblemSetup {
 public:
  static std::shared_ptr<const ProblemSetup> build(const ExperimentConfig& cfg);

  /// One run with a fresh copy of `policy` and the given replication seed.
  SaRunResult run(const SteplengthPolicy& policy, std::int64_t iters,
                  std::uint64_t seed) const;

  std::unique_ptr<SteplengthPolicy> make_policy(
      const ExperimentConfig& cfg) const;

  ProblemKind kind() const noexcept { return kind_; }
  const ProblemConstants& constants() const noexcept { return constants_; }
  const Vector& reference() const noexcept { return reference_; }
  const SaaResult& saa() const noexcept { return saa_; }
  const Vector& start() const noexcept { return start_; }
  /// e0 handed to the RSA scheme (D2, or scaled so that gamma0 <= 1/L).
  double rsa_e0() const;

  const UtilityProblem* utility() const noexcept { return utility_.get(); }
  const BimatrixProblem* bimatrix() const noexcept { return bimatrix_.get(); }
  const NetworkProblem* network() const noexcept { return network_.get(); }

 private:
  ProblemSetup() = default;

  ProblemKind kind_ = ProblemKind::kUtility;
  int n_ = 0;
  ProblemConstants constants_;
  Vector start_;
  Vector reference_;
  SaaResult saa_;
  std::unique_ptr<UtilityProblem> utility_;
  std::unique_ptr<SmoothedOracle> utility_oracle_;
  std::unique_ptr<BimatrixProblem> bimatrix_;
  std::unique_ptr<NetworkProblem> network_;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::shared_ptr<const ProblemSetup> setup;
  std::vector<SaRunResult> runs;
};

/// Runs config.replications independent runs with seeds seed + r.
ExperimentResult run_replications(const ExperimentConfig& cfg);
ExperimentResult run_replications(const ExperimentConfig& cfg,
                                  std::shared_ptr<const ProblemSetup> setup);

struct ConfidenceInterval {
  double lower;
  double upper;
  double level;
  bool log_domain;
};

/// Student-t interval for the mean, of log(samples) when log_domain.
ConfidenceInterval confidence_interval(const std::vector<double>& samples,
                                       double level, bool log_domain);

/// Errors are floored here before taking logs.
inline constexpr double kErrorFloor = 1e-300;

struct TrajectoryRow {
  std::int64_t k;
  double gamma;
  double mean_sq_error;
  double ci_lo;
  double ci_hi;
  double theory_bound;
};

/// Per-iteration mean error, log-domain CI and bound over replications.
std::vector<TrajectoryRow> aggregate(const std::vector<SaRunResult>& runs,
                                     double level = 0.90);

struct TerminalSummary {
  double mean;
  ConfidenceInterval ci;
};
TerminalSummary terminal_summary(const std::vector<SaRunResult>& runs,
                                 double level = 0.90);

void emit_csv(const std::vector<TrajectoryRow>& rows, const std::string& path);
std::vector<TrajectoryRow> read_csv(const std::string& path);

/// key=value listing of the resolved config, constants and terminal summary.
void write_metadata(const ExperimentResult& result, const std::string& path);

}  // namespace adaptsa
