#include <benchmark/benchmark.h>

#include "adaptsa/problems.hpp"
#include "adaptsa/projections.hpp"
#include "adaptsa/rng.hpp"
#include "adaptsa/sa_core.hpp"
#include "adaptsa/steplength.hpp"

namespace {

using namespace adaptsa;

void BM_ProjectSimplex(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(project_simplex(v));
}
BENCHMARK(BM_ProjectSimplex)->Arg(20)->Arg(200)->Arg(2000);

void BM_ProjectCapacity(benchmark::State& state) {
  const NetworkProblem net = NetworkProblem::generate(NetworkParams{}, 2);
  Rng rng(3);
  Vector v(net.dimension());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_capacity(v, net.A(), net.C()));
  }
}
BENCHMARK(BM_ProjectCapacity);

void BM_UtilityOracleStep(benchmark::State& state) {
  const UtilityProblem p = UtilityProblem::generate(UtilityParams{}, 4);
  const SimplexProjection simplex;
  Rng rng(5);
  Point x = p.barycenter();
  for (auto _ : state) {
    x = sa_step(x, utility_oracle(p, x, rng), 1e-3, simplex);
    benchmark::DoNotOptimize(x);
  }
}
BENCHMARK(BM_UtilityOracleStep);

void BM_BimatrixOracleStep(benchmark::State& state) {
  const BimatrixProblem game(20, 0.01, 0.2);
  Rng rng(6);
  SaddlePoint z = game.barycenter();
  for (auto _ : state) {
    auto [gx, gy] = game.sample(z, rng);
    z = saddle_step(z, gx, gy, 1e-2);
    benchmark::DoNotOptimize(z.x);
  }
}
BENCHMARK(BM_BimatrixOracleStep);

void BM_CsaRegimeLength(benchmark::State& state) {
  const CsaParams p{0.25, 0.5, 0.5, 4.0, 1.0, 2.0};
  CsaState s = csa_initial_state(p);
  for (int t = 0; t < 20; ++t) s = csa_advance(s, p);
  for (auto _ : state) benchmark::DoNotOptimize(csa_regime_length(s, p));
}
BENCHMARK(BM_CsaRegimeLength);

void BM_CsaSchedule(benchmark::State& state) {
  const CsaParams p{0.25, 0.5, 0.5, 4.0, 1.0, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(csa_schedule(p, state.range(0)));
  }
}
BENCHMARK(BM_CsaSchedule)->Arg(4000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
