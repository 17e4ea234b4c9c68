#include <benchmark/benchmark.h>

#include "glmcorr/beta_tests.hpp"
#include "glmcorr/fit.hpp"
#include "glmcorr/geometry.hpp"
#include "glmcorr/phi_tests.hpp"
#include "glmcorr/random.hpp"
#include "glmcorr/simulate.hpp"

namespace {

using namespace glmcorr;

struct Instance {
  DesignMatrix X;
  Eigen::VectorXd y;
  Hypothesis hyp;
};

Instance make_instance(int n, int p, int q) {
  SimScenario sc;
  sc.n = n;
  sc.p = p;
  sc.q = q;
  sc.phi_true = 2.0;
  sc.replications = 1;
  Instance in{scenario_design(sc), Eigen::VectorXd(n), {}};
  const Family fam(FamilyKind::Gamma);
  const Eigen::VectorXd eta = in.X.x * sc.coefficients();
  Rng rng({7, static_cast<std::uint64_t>(n)});
  for (int i = 0; i < n; ++i) in.y[i] = fam.sample(std::exp(eta[i]), sc.phi_true, rng);
  in.hyp.tested = sc.tested_columns();
  in.hyp.beta10 = Eigen::VectorXd::Zero(q);
  return in;
}

void BM_FitGammaLog(benchmark::State& state) {
  const Instance in = make_instance(static_cast<int>(state.range(0)), 4, 2);
  const Family fam(FamilyKind::Gamma);
  const Link link(LinkKind::Log);
  for (auto _ : state) benchmark::DoNotOptimize(fit_irls(in.X, in.y, fam, link));
}
BENCHMARK(BM_FitGammaLog)->Arg(20)->Arg(100)->Arg(1000);

void BM_Corrections(benchmark::State& state) {
  const Instance in = make_instance(static_cast<int>(state.range(0)), 4, 2);
  const Family fam(FamilyKind::Gamma);
  const Link link(LinkKind::Log);
  const FittedModel res = fit_restricted(in.X, in.y, fam, link, in.hyp);
  for (auto _ : state) {
    const ZBundle zb = ZBundle::build(in.X.x, in.hyp.tested, res.weights);
    const LambdaDiagonals L = lambda_diagonals(fam, link, res.eta);
    const CorrectionInputs ci{zb, L, res.phi, fam.phi_derivs(res.phi)};
    benchmark::DoNotOptimize(correction_lr(ci));
    benchmark::DoNotOptimize(correction_score(ci));
    benchmark::DoNotOptimize(correction_gradient(ci));
  }
}
BENCHMARK(BM_Corrections)->Arg(20)->Arg(100)->Arg(500);

void BM_FullTestReport(benchmark::State& state) {
  const Instance in = make_instance(static_cast<int>(state.range(0)), 4, 3);
  const Family fam(FamilyKind::Gamma);
  const Link link(LinkKind::Log);
  for (auto _ : state) benchmark::DoNotOptimize(full_test_report(in.X, in.y, fam, link, in.hyp));
}
BENCHMARK(BM_FullTestReport)->Arg(20)->Arg(30);

void BM_PhiTestReport(benchmark::State& state) {
  const Instance in = make_instance(30, 4, 1);
  const Family fam(FamilyKind::Gamma);
  const Link link(LinkKind::Log);
  for (auto _ : state) benchmark::DoNotOptimize(full_phi_test_report(in.X, in.y, fam, link, PhiHypothesis{2.0}));
}
BENCHMARK(BM_PhiTestReport);

void BM_SimulateReplications(benchmark::State& state) {
  SimScenario sc;
  sc.n = 20;
  sc.p = 4;
  sc.q = 3;
  sc.replications = 200;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(sc, 1));
  state.SetItemsProcessed(state.iterations() * sc.replications);
}
BENCHMARK(BM_SimulateReplications)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
