#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

#include "adaptsa/harness.hpp"
#include "cli_options.hpp"

namespace adaptsa {
namespace {

namespace fs = std::filesystem;

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("adaptsa_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ExperimentConfig small_config(ProblemKind p, Scheme s) {
  ExperimentConfig cfg;
  cfg.problem = p;
  cfg.scheme = s;
  cfg.n = 4;
  cfg.iters = 60;
  cfg.replications = 3;
  cfg.saa_samples = 2000;
  cfg.eta = p == ProblemKind::kBimatrix ? 0.05 : 0.5;
  cfg.eps = p == ProblemKind::kNetwork ? 0.0 : 0.2;
  cfg.threads = 2;
  return cfg;
}

TEST(ConfidenceInterval, Examples) {
  const ConfidenceInterval ones = confidence_interval({1.0, 1.0, 1.0}, 0.9, true);
  EXPECT_EQ(ones.lower, 0.0);
  EXPECT_EQ(ones.upper, 0.0);

  const double e = std::numbers::e;
  const ConfidenceInterval logs =
      confidence_interval({1.0, e, e * e}, 0.9, true);
  EXPECT_NEAR(0.5 * (logs.lower + logs.upper), 1.0, 1e-15);

  // Closed-form t quantile for 2 degrees of freedom: (2p-1) sqrt(2/(4p(1-p))).
  const ConfidenceInterval lin = confidence_interval({1.0, 2.0, 3.0}, 0.9, false);
  const double t95 = 0.9 * std::sqrt(2.0 / (4.0 * 0.95 * 0.05));
  const double half = t95 / std::sqrt(3.0);
  EXPECT_NEAR(lin.lower, 2.0 - half, 1e-12);
  EXPECT_NEAR(lin.upper, 2.0 + half, 1e-12);
  EXPECT_FALSE(lin.log_domain);
  EXPECT_DOUBLE_EQ(lin.level, 0.9);
}

TEST(ConfidenceInterval, Errors) {
  EXPECT_THROW(confidence_interval({1.0}, 0.9, false), InvalidInput);
  EXPECT_THROW(confidence_interval({1.0, 0.0}, 0.9, true), InvalidInput);
  EXPECT_THROW(confidence_interval({1.0, 2.0}, 1.0, false), InvalidInput);
  EXPECT_NO_THROW(confidence_interval({-1.0, 2.0}, 0.9, false));
}

TEST(Config, ValidationAndParsing) {
  EXPECT_EQ(parse_problem("network"), ProblemKind::kNetwork);
  EXPECT_EQ(parse_scheme("csa"), Scheme::kCsa);
  EXPECT_EQ(to_string(Scheme::kHsa), "hsa");
  EXPECT_THROW(parse_problem("lp"), ConfigError);
  ExperimentConfig cfg;
  cfg.replications = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.replications = 2;
  cfg.scheme = Scheme::kCsa;
  cfg.theta = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Csv, SingleIterationHasTwoLines) {
  ExperimentConfig cfg = small_config(ProblemKind::kBimatrix, Scheme::kRsa);
  cfg.iters = 1;
  cfg.replications = 2;
  const ExperimentResult res = run_replications(cfg);
  ASSERT_EQ(res.runs.size(), 2u);
  ASSERT_EQ(res.runs[0].records.size(), 1u);
  EXPECT_NE(res.runs[0].final_point, res.runs[1].final_point);
  const std::string path = temp_path("n1.csv");
  emit_csv(aggregate(res.runs), path);
  const std::string text = slurp(path);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.back(), '\n');
  fs::remove(path);
}

TEST(Csv, RoundTripIsBitExact) {
  const ExperimentResult res =
      run_replications(small_config(ProblemKind::kUtility, Scheme::kCsa));
  const auto rows = aggregate(res.runs);
  const std::string path = temp_path("roundtrip.csv");
  emit_csv(rows, path);
  const auto back = read_csv(path);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].k, rows[i].k);
    EXPECT_EQ(back[i].gamma, rows[i].gamma);
    EXPECT_EQ(back[i].mean_sq_error, rows[i].mean_sq_error);
    EXPECT_EQ(back[i].ci_lo, rows[i].ci_lo);
    EXPECT_EQ(back[i].ci_hi, rows[i].ci_hi);
    EXPECT_EQ(back[i].theory_bound, rows[i].theory_bound);
  }
  fs::remove(path);
}

TEST(Csv, NanBoundSurvivesRoundTrip) {
  const ExperimentResult res =
      run_replications(small_config(ProblemKind::kNetwork, Scheme::kHsa));
  const std::string path = temp_path("hsa.csv");
  emit_csv(aggregate(res.runs), path);
  for (const TrajectoryRow& r : read_csv(path)) {
    EXPECT_TRUE(std::isnan(r.theory_bound));
  }
  fs::remove(path);
}

TEST(Csv, UnwritablePathIsAnIoError) {
  EXPECT_THROW(emit_csv({}, "/nonexistent-dir/x.csv"), IoError);
}

TEST(Replications, IdenticalConfigsGiveIdenticalFiles) {
  const ExperimentConfig cfg = small_config(ProblemKind::kNetwork, Scheme::kRsa);
  const std::string a = temp_path("det_a.csv"), b = temp_path("det_b.csv");
  emit_csv(aggregate(run_replications(cfg).runs), a);
  ExperimentConfig single = cfg;
  single.threads = 1;
  emit_csv(aggregate(run_replications(single).runs), b);
  EXPECT_EQ(slurp(a), slurp(b));
  fs::remove(a);
  fs::remove(b);
}

TEST(Replications, CiBracketsTheLogCenter) {
  ExperimentConfig cfg = small_config(ProblemKind::kUtility, Scheme::kRsa);
  cfg.replications = 50;
  cfg.iters = 200;
  const auto rows = aggregate(run_replications(cfg).runs);
  for (const TrajectoryRow& r : rows) {
    ASSERT_LE(r.ci_lo, r.ci_hi);
    // Mean of logs never exceeds log of the mean.
    ASSERT_LE(r.ci_lo, std::log(r.mean_sq_error) + 1e-12);
  }
}

TEST(Replications, GammaAndBoundColumnsFollowThePolicy) {
  const ExperimentConfig cfg = small_config(ProblemKind::kUtility, Scheme::kRsa);
  const ExperimentResult res = run_replications(cfg);
  const auto policy = res.setup->make_policy(cfg);
  const ProblemConstants& c = res.setup->constants();
  for (const TrajectoryRow& r : aggregate(res.runs)) {
    const Step s = policy->next();
    EXPECT_EQ(r.gamma, s.gamma);
    EXPECT_NEAR(r.theory_bound, 2.0 * c.nu2 / c.eta * r.gamma,
                1e-12 * r.theory_bound);
  }
  EXPECT_DOUBLE_EQ(aggregate(res.runs).front().theory_bound, res.setup->rsa_e0());
}

TEST(Replications, CsaStepsArePiecewiseConstant) {
  ExperimentConfig cfg = small_config(ProblemKind::kBimatrix, Scheme::kCsa);
  cfg.iters = 3000;
  cfg.replications = 2;
  const auto rows = aggregate(run_replications(cfg).runs);
  int drops = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].gamma != rows[i - 1].gamma) {
      EXPECT_DOUBLE_EQ(rows[i].gamma, cfg.theta * rows[i - 1].gamma);
      ++drops;
    }
  }
  EXPECT_GT(drops, 0);
}

TEST(Replications, ExplicitGammaAboveInverseLIsRejected) {
  ExperimentConfig cfg = small_config(ProblemKind::kNetwork, Scheme::kRsa);
  cfg.gamma0 = 10.0;
  EXPECT_THROW(run_replications(cfg), ConfigError);
}

TEST(Metadata, RecordsConfigurationAndConstants) {
  const ExperimentResult res =
      run_replications(small_config(ProblemKind::kNetwork, Scheme::kCsa));
  const std::string path = temp_path("run.meta");
  write_metadata(res, path);
  const std::string text = slurp(path);
  for (const char* key : {"problem=network", "scheme=csa", "replications=3",
                          "const_L=", "const_nu2=", "saa_converged="}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
  fs::remove(path);
}

TEST(Cli, CommandLineOverridesConfigFile) {
  const std::string ini = temp_path("cfg.ini");
  {
    std::ofstream out(ini);
    out << "problem=network\niters=7\nreplications=4\nscheme=csa\n";
  }
  CLI::App app;
  cli::Options o;
  cli::add_options(app, o);
  const std::string iters = "9";
  std::vector<std::string> args{"adaptsa_cli", "--config", ini, "--iters", iters};
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  app.parse(static_cast<int>(argv.size()), argv.data());
  const ExperimentConfig cfg = o.resolve();
  EXPECT_EQ(cfg.problem, ProblemKind::kNetwork);
  EXPECT_EQ(cfg.scheme, Scheme::kCsa);
  EXPECT_EQ(cfg.iters, 9);
  EXPECT_EQ(cfg.replications, 4);
  EXPECT_FALSE(cfg.gamma0.has_value());
  fs::remove(ini);
}

}  // namespace
}  // namespace adaptsa
