#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <memory>
#include <vector>

#include "sforge/assembler.hpp"
#include "sforge/fft.hpp"
#include "sforge/kernels.hpp"
#include "sforge/scenario.hpp"
#include "sforge/specfun.hpp"
#include "sforge/verifier.hpp"

using namespace sforge;

namespace {

void BM_Fft(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Fft fft(n);
  std::vector<std::complex<double>> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {std::sin(0.1 * i), std::cos(0.07 * i)};
  for (auto _ : state) {
    fft.forward(v.data());
    fft.inverse(v.data());
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Fft)->Arg(256)->Arg(1024)->Arg(4096);

void BM_JacobiElliptic(benchmark::State& state) {
  double u = 0.3;
  for (auto _ : state) {
    const auto j = specfun::jacobi_elliptic(u, 0.8);
    benchmark::DoNotOptimize(j.sn);
    u += 1e-6;
  }
}
BENCHMARK(BM_JacobiElliptic);

void BM_CompleteEllipticK(benchmark::State& state) {
  double k = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::complete_elliptic_k(k));
    k = (k < 0.95) ? k + 1e-6 : 0.2;
  }
}
BENCHMARK(BM_CompleteEllipticK);

void BM_AiryMaclaurin(benchmark::State& state) {
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::airy_ai(x));
    x = (x < 3.5) ? x + 1e-6 : -3.0;
  }
}
BENCHMARK(BM_AiryMaclaurin);

void BM_AiryBridge(benchmark::State& state) {
  double x = 4.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::airy_ai(x));
    x = (x < 9.0) ? x + 1e-6 : 4.5;
  }
}
BENCHMARK(BM_AiryBridge);

void BM_AiryOscillatory(benchmark::State& state) {
  double x = -25.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::airy_ai(x));
    x = (x < -10.0) ? x + 1e-6 : -25.0;
  }
}
BENCHMARK(BM_AiryOscillatory);

void BM_PropagatePhaseState(benchmark::State& state) {
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::harmonic_trap(1.5));
  const auto k = kernels::base_kernels(q, characteristic::solve_basis(*q, 1.5));
  kernels::PhaseState ini;
  ini.mu = 1.0;
  ini.alpha = 0.1;
  ini.beta = 1.1;
  ini.gamma = 0.2;
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::propagate(k, ini, t));
    t = (t < 1.3) ? t + 1e-5 : 0.1;
  }
}
BENCHMARK(BM_PropagatePhaseState);

void BM_PsiEvaluation(benchmark::State& state) {
  const auto sol =
      scenario::build_solution(scenario::find_catalog_scenario("harmonic-bright"));
  const auto st = sol.state_at(0.7);
  double x = -10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sol.psi(x, st));
    x = (x < 10.0) ? x + 1e-4 : -10.0;
  }
}
BENCHMARK(BM_PsiEvaluation);

void BM_SplitStep(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto sol = scenario::build_solution(scenario::find_catalog_scenario("free-bright"));
  const auto laws = assembler::make_balance_laws(sol);
  const double L = 22.0;
  std::vector<std::complex<double>> psi0(n);
  const auto s0 = sol.state_at(0.0);
  for (std::size_t i = 0; i < n; ++i)
    psi0[i] = sol.psi(-L + 2.0 * L * static_cast<double>(i) / static_cast<double>(n), s0);
  const double kmax = std::numbers::pi * static_cast<double>(n) / (2.0 * L);
  verifier::PropagateOptions opt;
  opt.dt = std::min(1e-4, 2.0 / (kmax * kmax));  // stability guard headroom
  opt.aliasing_check_every = 0;
  for (auto _ : state) {
    const auto grid =
        verifier::split_step_propagate(psi0, sol.coeffs(), laws, L, 0.0, 64 * opt.dt, opt);
    benchmark::DoNotOptimize(grid.values.data());
  }
  state.SetItemsProcessed(state.iterations() * 64);  // Strang steps per iteration
}
BENCHMARK(BM_SplitStep)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
