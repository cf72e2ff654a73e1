#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>

#include "adaptsa/harness.hpp"
#include "cli_options.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Replicated stochastic approximation experiments"};
  adaptsa::cli::Options opts;
  adaptsa::cli::add_options(app, opts);
  CLI11_PARSE(app, argc, argv);

  try {
    const adaptsa::ExperimentConfig cfg = opts.resolve();
    const adaptsa::ExperimentResult result = adaptsa::run_replications(cfg);
    const adaptsa::TerminalSummary t = adaptsa::terminal_summary(result.runs);
    const auto& c = result.setup->constants();

    std::printf("%s/%s n=%d N=%lld reps=%d\n",
                adaptsa::to_string(cfg.problem).c_str(),
                adaptsa::to_string(cfg.scheme).c_str(), cfg.n,
                static_cast<long long>(cfg.iters), cfg.replications);
    std::printf("  constants: eta=%.6g L=%.6g nu2=%.6g D2=%.6g C=%.6g\n", c.eta,
                c.L, c.nu2, c.D2, c.C);
    std::printf("  terminal mean sq error %.6e, 90%% CI [%.6e, %.6e]\n", t.mean,
                std::exp(t.ci.lower), std::exp(t.ci.upper));

    if (!cfg.out.empty()) {
      adaptsa::emit_csv(adaptsa::aggregate(result.runs), cfg.out);
      adaptsa::write_metadata(result, cfg.out + ".meta");
      std::printf("  wrote %s and %s.meta\n", cfg.out.c_str(), cfg.out.c_str());
    }
  } catch (const adaptsa::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
