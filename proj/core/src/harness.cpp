#include "adaptsa/harness.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace adaptsa {

namespace {

constexpr int kPilotDraws = 10000;
constexpr double kPilotSafety = 1.5;
constexpr int kBoundDraws = 100000;
constexpr double kBoundPercentile = 0.999;
constexpr double kBoundSafety = 1.25;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(ProblemKind p) {
  switch (p) {
    case ProblemKind::kUtility:
      return "utility";
    case ProblemKind::kBimatrix:
      return "bimatrix";
    case ProblemKind::kNetwork:
      return "network";
  }
  return "?";
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kHsa:
      return "hsa";
    case Scheme::kRsa:
      return "rsa";
    case Scheme::kCsa:
      return "csa";
  }
  return "?";
}

ProblemKind parse_problem(const std::string& s) {
  if (s == "utility") return ProblemKind::kUtility;
  if (s == "bimatrix") return ProblemKind::kBimatrix;
  if (s == "network") return ProblemKind::kNetwork;
  throw ConfigError("unknown problem '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "hsa") return Scheme::kHsa;
  if (s == "rsa") return Scheme::kRsa;
  if (s == "csa") return Scheme::kCsa;
  throw ConfigError("unknown scheme '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (n < 1) throw ConfigError("n must be at least 1");
  if (iters < 1) throw ConfigError("iters must be at least 1");
  if (replications < 2) throw ConfigError("replications must be at least 2");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(eps >= 0.0)) throw ConfigError("eps must be nonnegative");
  if (scheme == Scheme::kHsa && !(alpha > 0.0)) {
    throw ConfigError("alpha must be positive");
  }
  if (scheme == Scheme::kCsa && !(theta > 0.0 && theta < 1.0)) {
    throw ConfigError("theta must lie in (0, 1)");
  }
  if (gamma0 && !(*gamma0 > 0.0)) throw ConfigError("gamma0 must be positive");
  if (saa_samples < 1000) throw ConfigError("saa-samples must be >= 1000");
  if (problem == ProblemKind::kUtility && pieces < 1) {
    throw ConfigError("pieces must be at least 1");
  }
  if (problem == ProblemKind::kUtility && !(eps > 0.0)) {
    throw ConfigError("the utility problem needs eps > 0");
  }
  if (problem == ProblemKind::kNetwork && (capacity < 1 || capacity > 3)) {
    throw ConfigError("capacity must be 1, 2 or 3");
  }
  if (threads < 0) throw ConfigError("threads must be nonnegative");
}

// ---------------------------------------------------------------------------
// ProblemSetup

std::shared_ptr<const ProblemSetup> ProblemSetup::build(
    const ExperimentConfig& cfg) {
  cfg.validate();
  std::shared_ptr<ProblemSetup> s(new ProblemSetup());
  s->kind_ = cfg.problem;
  s->n_ = cfg.n;
  Rng pilot(cfg.seed, Stream::kPilot);
  const SaaOptions saa_opts{cfg.saa_samples, 200000, 1e-8, cfg.seed};

  switch (cfg.problem) {
    case ProblemKind::kUtility: {
      s->utility_ = std::make_unique<UtilityProblem>(UtilityProblem::generate(
          {cfg.n, cfg.pieces, cfg.eta, cfg.eps}, cfg.seed));
      UtilityProblem& p = *s->utility_;
      s->start_ = p.barycenter();
      const double C = p.estimate_subgradient_bound(
          s->start_, kBoundDraws, kBoundPercentile, kBoundSafety, pilot);
      p.set_truncation(C);
      s->utility_oracle_ = std::make_unique<SmoothedOracle>(p, cfg.eps);
      s->constants_.C = C;
      s->constants_.eta = cfg.eta;
      s->constants_.L = smoothing_lipschitz(cfg.n, C, cfg.eps) + cfg.eta;
      s->constants_.D2 = 2.0;
      s->constants_.nu2 =
          kPilotSafety * estimate_noise_second_moment(*s->utility_oracle_,
                                                      s->start_, kPilotDraws,
                                                      pilot);
      s->saa_ = saa_reference(p, saa_opts);
      break;
    }
    case ProblemKind::kBimatrix: {
      s->bimatrix_ = std::make_unique<BimatrixProblem>(cfg.n, cfg.eta, cfg.eps);
      const BimatrixProblem& p = *s->bimatrix_;
      const SaddlePoint z0 = p.barycenter();
      s->start_ = stack(z0);
      const Eigen::JacobiSVD<Matrix> svd(p.A());
      s->constants_.C = std::numeric_limits<double>::quiet_NaN();
      s->constants_.eta = cfg.eta;
      s->constants_.L = svd.singularValues()(0) + cfg.eta;
      s->constants_.D2 = 4.0;
      s->constants_.nu2 =
          kPilotSafety * estimate_noise_second_moment(p, z0, kPilotDraws, pilot);
      s->saa_ = saa_reference(p, saa_opts);
      break;
    }
    case ProblemKind::kNetwork: {
      s->network_ = std::make_unique<NetworkProblem>(
          NetworkProblem::generate({cfg.n, cfg.capacity, 0.4}, cfg.seed));
      const NetworkProblem& p = *s->network_;
      s->start_ = Vector::Zero(cfg.n);
      s->constants_.C = std::numeric_limits<double>::quiet_NaN();
      s->constants_.eta = p.strong_convexity();
      s->constants_.L = p.lipschitz();
      s->constants_.D2 = p.diameter2();
      s->constants_.nu2 =
          kPilotSafety *
          estimate_noise_second_moment(p, s->start_, kPilotDraws, pilot);
      s->saa_ = saa_reference(p, saa_opts);
      break;
    }
  }
  s->reference_ = s->saa_.x;
  return s;
}

double ProblemSetup::rsa_e0() const {
  const ProblemConstants& c = constants_;
  const double cap = 2.0 * c.nu2 / (c.eta * c.L);
  return std::min(c.D2, cap);
}

std::unique_ptr<SteplengthPolicy> ProblemSetup::make_policy(
    const ExperimentConfig& cfg) const {
  const ProblemConstants& c = constants_;
  switch (cfg.scheme) {
    case Scheme::kHsa:
      return std::make_unique<HsaPolicy>(cfg.alpha);
    case Scheme::kRsa:
      if (cfg.gamma0) {
        if (*cfg.gamma0 * c.L > 1.0) {
          throw ConfigError("gamma0 exceeds 1/L = " + fmt17(1.0 / c.L));
        }
        return std::make_unique<RsaPolicy>(*cfg.gamma0, 0.5 * c.eta,
                                           2.0 * c.nu2 / c.eta);
      }
      return std::make_unique<RsaPolicy>(
          RsaPolicy::smooth(c.eta, c.nu2, rsa_e0(), c.L));
    case Scheme::kCsa:
      return std::make_unique<CsaPolicy>(
          CsaParams{1.0 / c.L, cfg.theta, c.eta, c.L, c.nu2, c.D2});
  }
  throw ConfigError("unknown scheme");
}

SaRunResult ProblemSetup::run(const SteplengthPolicy& policy,
                              std::int64_t iters, std::uint64_t seed) const {
  std::unique_ptr<SteplengthPolicy> pol = policy.clone();
  Rng rng(seed, Stream::kReplication);
  switch (kind_) {
    case ProblemKind::kUtility: {
      const SimplexProjection proj;
      return run_sa(*utility_oracle_, proj, *pol, start_, iters, reference_,
                    rng);
    }
    case ProblemKind::kBimatrix: {
      const SimplexProjection proj;
      const SaddlePoint z0{start_.head(n_), start_.tail(n_)};
      const SaddlePoint ref{reference_.head(n_), reference_.tail(n_)};
      return run_saddle(*bimatrix_, proj, proj, *pol, z0, iters, ref, rng);
    }
    case ProblemKind::kNetwork:
      return run_sa(*network_, network_->projection(), *pol, start_, iters,
                    reference_, rng);
  }
  throw ConfigError("unknown problem");
}

// ---------------------------------------------------------------------------
// Replications

ExperimentResult run_replications(const ExperimentConfig& cfg) {
  return run_replications(cfg, ProblemSetup::build(cfg));
}

ExperimentResult run_replications(const ExperimentConfig& cfg,
                                  std::shared_ptr<const ProblemSetup> setup) {
  cfg.validate();
  if (!setup || setup->kind() != cfg.problem) {
    throw ConfigError("problem setup does not match the config");
  }
  const std::unique_ptr<SteplengthPolicy> policy = setup->make_policy(cfg);

  ExperimentResult result{cfg, setup, {}};
  result.runs.resize(static_cast<std::size_t>(cfg.replications));

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(cfg.replications));

  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::uint64_t failed_seed = 0;
  auto work = [&] {
    for (int r = next++; r < cfg.replications; r = next++) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(r);
      try {
        result.runs[static_cast<std::size_t>(r)] =
            setup->run(*policy, cfg.iters, seed);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error || seed < failed_seed) {
          first_error = std::current_exception();
          failed_seed = seed;
        }
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const std::exception& e) {
      throw std::runtime_error("replication with seed " +
                               std::to_string(failed_seed) +
                               " failed: " + e.what());
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Statistics and output

ConfidenceInterval confidence_interval(const std::vector<double>& samples,
                                       double level, bool log_domain) {
  if (samples.size() < 2) {
    throw InvalidInput("confidence_interval: need at least 2 samples");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw InvalidInput("confidence_interval: level must lie in (0, 1)");
  }
  const double m = static_cast<double>(samples.size());
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double v = samples[i];
    if (log_domain) {
      if (!(v > 0.0)) {
        throw InvalidInput("confidence_interval: nonpositive sample in log "
                           "domain");
      }
      v = std::log(v);
    }
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double sd = std::sqrt(m2 / (m - 1.0));
  const boost::math::students_t dist(m - 1.0);
  const double tq = boost::math::quantile(dist, 0.5 * (1.0 + level));
  const double half = tq * sd / std::sqrt(m);
  return {mean - half, mean + half, level, log_domain};
}

std::vector<TrajectoryRow> aggregate(const std::vector<SaRunResult>& runs,
                                     double level) {
  if (runs.empty()) throw InvalidInput("aggregate: no runs");
  const std::size_t N = runs.front().records.size();
  for (const SaRunResult& r : runs) {
    if (r.records.size() != N) {
      throw InvalidInput("aggregate: trajectories differ in length");
    }
  }
  std::vector<TrajectoryRow> rows;
  rows.reserve(N);
  std::vector<double> errs(runs.size());
  for (std::size_t k = 0; k < N; ++k) {
    double sum = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double e = runs[r].records[k].squared_error;
      sum += e;
      errs[r] = std::max(e, kErrorFloor);
    }
    const SaRunRecord& first = runs.front().records[k];
    TrajectoryRow row{first.k, first.gamma,
                      sum / static_cast<double>(runs.size()), 0.0, 0.0,
                      first.bound};
    if (runs.size() >= 2) {
      const ConfidenceInterval ci = confidence_interval(errs, level, true);
      row.ci_lo = ci.lower;
      row.ci_hi = ci.upper;
    } else {
      row.ci_lo = row.ci_hi = std::log(errs.front());
    }
    rows.push_back(row);
  }
  return rows;
}

TerminalSummary terminal_summary(const std::vector<SaRunResult>& runs,
                                 double level) {
  std::vector<double> errs;
  errs.reserve(runs.size());
  double sum = 0.0;
  for (const SaRunResult& r : runs) {
    sum += r.terminal_error;
    errs.push_back(std::max(r.terminal_error, kErrorFloor));
  }
  return {sum / static_cast<double>(runs.size()),
          confidence_interval(errs, level, true)};
}

void emit_csv(const std::vector<TrajectoryRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "k,gamma,mean_sq_error,ci_lo,ci_hi,theory_bound\n";
  for (const TrajectoryRow& r : rows) {
    out << r.k << ',' << fmt17(r.gamma) << ',' << fmt17(r.mean_sq_error) << ','
        << fmt17(r.ci_lo) << ',' << fmt17(r.ci_hi) << ','
        << fmt17(r.theory_bound) << '\n';
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::vector<TrajectoryRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) ||
      line != "k,gamma,mean_sq_error,ci_lo,ci_hi,theory_bound") {
    throw IoError("'" + path + "' lacks the trajectory header");
  }
  std::vector<TrajectoryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw IoError("malformed row in '" + path + "'");
    rows.push_back({std::stoll(f[0]), std::strtod(f[1].c_str(), nullptr),
                    std::strtod(f[2].c_str(), nullptr),
                    std::strtod(f[3].c_str(), nullptr),
                    std::strtod(f[4].c_str(), nullptr),
                    std::strtod(f[5].c_str(), nullptr)});
  }
  return rows;
}

void write_metadata(const ExperimentResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const ExperimentConfig& c = result.config;
  const ProblemSetup& s = *result.setup;
  const ProblemConstants& k = s.constants();
  out << "problem=" << to_string(c.problem) << '\n'
      << "scheme=" << to_string(c.scheme) << '\n'
      << "n=" << c.n << '\n'
      << "iters=" << c.iters << '\n'
      << "eta=" << fmt17(c.eta) << '\n'
      << "eps=" << fmt17(c.eps) << '\n'
      << "theta=" << fmt17(c.theta) << '\n'
      << "alpha=" << fmt17(c.alpha) << '\n'
      << "replications=" << c.replications << '\n'
      << "seed=" << c.seed << '\n'
      << "saa_samples=" << c.saa_samples << '\n'
      << "pieces=" << c.pieces << '\n'
      << "capacity=" << c.capacity << '\n'
      << "rng=mt19937_64 seed_seq(seed,stream); uniforms from top 53 bits; "
         "normals by Marsaglia polar\n"
      << "const_eta=" << fmt17(k.eta) << '\n'
      << "const_L=" << fmt17(k.L) << '\n'
      << "const_nu2=" << fmt17(k.nu2) << '\n'
      << "const_D2=" << fmt17(k.D2) << '\n'
      << "const_C=" << fmt17(k.C) << '\n'
      << "rsa_e0=" << fmt17(s.rsa_e0()) << '\n'
      << "saa_converged=" << (s.saa().converged ? "true" : "false") << '\n'
      << "saa_gradient_mapping=" << fmt17(s.saa().gradient_mapping) << '\n';
  if (!result.runs.empty()) {
    out << "gamma0=" << fmt17(result.runs.front().records.front().gamma)
        << '\n';
    int clamped = 0;
    for (const SaRunResult& r : result.runs) clamped += r.clamped ? 1 : 0;
    out << "clamped_runs=" << clamped << '\n';
    if (result.runs.size() >= 2) {
      const TerminalSummary t = terminal_summary(result.runs);
      out << "terminal_mean_sq_error=" << fmt17(t.mean) << '\n'
          << "terminal_ci_lo=" << fmt17(t.ci.lower) << '\n'
          << "terminal_ci_hi=" << fmt17(t.ci.upper) << '\n'
          << "terminal_ci_level=" << fmt17(t.ci.level) << '\n';
    }
  }
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace adaptsa
