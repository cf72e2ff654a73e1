#pragma once

#include <CLI11.hpp>

#include <string>

#include "adaptsa/harness.hpp"

namespace adaptsa::cli {

/// Raw option storage; resolve() turns it into an ExperimentConfig.
struct Options {
  ExperimentConfig cfg;
  std::string problem = "utility";
  std::string scheme = "rsa";
  double gamma0 = 0.0;

  ExperimentConfig resolve() const {
    ExperimentConfig out = cfg;
    out.problem = parse_problem(problem);
    out.scheme = parse_scheme(scheme);
    if (gamma0 > 0.0) out.gamma0 = gamma0;
    out.validate();
    return out;
  }
};

/// Registers every flag on `app`. Flags given on the command line override
/// values read from --config.
inline void add_options(CLI::App& app, Options& o) {
  app.option_defaults()->always_capture_default();
  app.add_option("--problem", o.problem, "utility | bimatrix | network")
      ->check(CLI::IsMember({"utility", "bimatrix", "network"}));
  app.add_option("--scheme", o.scheme, "hsa | rsa | csa")
      ->check(CLI::IsMember({"hsa", "rsa", "csa"}));
  app.add_option("--n", o.cfg.n, "problem dimension (users / strategies)")
      ->check(CLI::PositiveNumber);
  app.add_option("--iters", o.cfg.iters, "iterations per replication")
      ->check(CLI::PositiveNumber);
  app.add_option("--eta", o.cfg.eta, "regularization / strong convexity");
  app.add_option("--eps", o.cfg.eps, "smoothing radius");
  app.add_option("--theta", o.cfg.theta, "CSA step drop factor");
  app.add_option("--alpha", o.cfg.alpha, "HSA step numerator");
  app.add_option("--gamma0", o.gamma0,
                 "RSA initial step; 0 derives it from eta, nu2 and e0");
  app.add_option("--replications", o.cfg.replications, "independent runs")
      ->check(CLI::Range(2, 1 << 20));
  app.add_option("--seed", o.cfg.seed, "base seed; run r uses seed + r");
  app.add_option("--out", o.cfg.out,
                 "CSV output path; metadata goes to <out>.meta");
  app.add_option("--saa-samples", o.cfg.saa_samples,
                 "sample size of the reference solve");
  app.add_option("--pieces", o.cfg.pieces, "utility: number of linear pieces");
  app.add_option("--capacity", o.cfg.capacity, "network: capacity preset 1-3")
      ->check(CLI::Range(1, 3));
  app.add_option("--threads", o.cfg.threads, "worker threads; 0 = all cores");
  app.set_config("--config", "", "flat key=value file with flag names as keys");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
}

}  // namespace adaptsa::cli
