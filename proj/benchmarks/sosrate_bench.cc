#include <benchmark/benchmark.h>

#include "sosrate/certify.h"
#include "sosrate/certsearch.h"
#include "sosrate/oracle.h"

namespace {

using namespace sosrate;

FunctionClass Class(bool composite) {
  FunctionClass fc;
  fc.mu = 1;
  fc.L = 10;
  fc.composite = composite;
  return fc;
}

AlgorithmSpec Spec(int index) {
  AlgorithmSpec s;
  s.kind = static_cast<AlgorithmKind>(index);
  s.gamma = Rational(1, 10);
  s.epsilon = s.kind == AlgorithmKind::kGdGoldstein ? Rational(2, 5) : Rational(1, 4);
  s.eta = 2;
  s.c1 = Rational(1, 10);
  s.c2 = Rational(9, 10);
  return s;
}

void BM_SolveRate(benchmark::State& state) {
  const auto spec = Spec(static_cast<int>(state.range(0)));
  const auto problem = BuildScenario(Class(spec.IsProximal()), spec);
  const auto sdp = state.range(1) ? BuildPepDual(problem) : BuildSosSdp(problem);
  state.SetLabel(std::string(ScenarioKey(spec.kind)) + (state.range(1) ? "/pep" : "/sos"));
  for (auto _ : state) benchmark::DoNotOptimize(SolveRate(sdp));
}
BENCHMARK(BM_SolveRate)->ArgsProduct({{0, 1, 2, 3, 4, 5, 6}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_BuildScenario(benchmark::State& state) {
  const auto spec = Spec(static_cast<int>(state.range(0)));
  const auto fc = Class(spec.IsProximal());
  state.SetLabel(std::string(ScenarioKey(spec.kind)));
  for (auto _ : state) benchmark::DoNotOptimize(BuildSosSdp(BuildScenario(fc, spec)));
}
BENCHMARK(BM_BuildScenario)->DenseRange(0, 6);

void BM_VerifyIdentity(benchmark::State& state) {
  const auto spec = Spec(static_cast<int>(state.range(0)));
  const auto fc = Class(spec.IsProximal());
  const auto problem = BuildScenario(fc, spec);
  const auto cert = Catalog(problem.key).Evaluate(fc, spec);
  state.SetLabel(problem.key);
  for (auto _ : state) benchmark::DoNotOptimize(VerifyIdentity(cert, problem));
}
BENCHMARK(BM_VerifyIdentity)->DenseRange(0, 6);

void BM_VerifyPsdPgmEls(benchmark::State& state) {
  const auto spec = Spec(static_cast<int>(AlgorithmKind::kPgmExactLineSearch));
  const auto cert = Catalog("pgm_els").Evaluate(Class(true), spec);
  const auto method = state.range(0) ? PsdMethod::kCharpolyDescartes : PsdMethod::kRationalLdl;
  for (auto _ : state) benchmark::DoNotOptimize(VerifyPsd(cert.gram, method));
}
BENCHMARK(BM_VerifyPsdPgmEls)->Arg(0)->Arg(1);

template <class Scalar>
void BM_OracleRun(benchmark::State& state) {
  const auto spec = Spec(static_cast<int>(state.range(0)));
  const auto fc = Class(spec.IsProximal());
  std::mt19937_64 rng(1);
  const auto f = RandomTestFunction(fc, 3, rng);
  const auto x0 = RandomPoint(3, rng);
  RunOptions options;
  options.steps = 5;
  state.SetLabel(std::string(ScenarioKey(spec.kind)));
  for (auto _ : state) benchmark::DoNotOptimize(Run<Scalar>(spec, fc, f, x0, options));
}
BENCHMARK_TEMPLATE(BM_OracleRun, double)->DenseRange(0, 6);
BENCHMARK_TEMPLATE(BM_OracleRun, Rational)->Arg(0)->Arg(1)->Arg(5)->Arg(6);

}  // namespace

BENCHMARK_MAIN();
