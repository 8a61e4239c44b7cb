#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>

#include "sforge/errors.hpp"
#include "sforge/scenario.hpp"
#include "sforge/verifier.hpp"

using namespace sforge;
using namespace sforge::verifier;
using std::complex;

namespace {

BalanceLaws zero_laws() {
  BalanceLaws laws;
  laws.h_of_t = [](double) { return 0.0; };
  laws.g_of_xt = [](double, double) { return 0.0; };
  laws.forcing_absorbed = true;
  return laws;
}

}  // namespace

TEST_CASE("l2 relative error basics") {
  std::vector<complex<double>> a(64, {1.0, 0.0}), b(64, {1.0, 0.0});
  CHECK(l2_relative_error(a, b) == 0.0);
  for (auto& z : a) z *= 2.0;
  CHECK(l2_relative_error(a, b) == doctest::Approx(1.0));
  std::vector<complex<double>> zero(64, {0.0, 0.0});
  CHECK_THROWS_AS(l2_relative_error(a, zero), NumericalError);
}

TEST_CASE("zero field has zero residual") {
  const auto q = characteristic::free_particle(1.0);
  auto sampler = FieldSampler::of_function([](double, double) {
    return complex<double>{0.0, 0.0};
  });
  GridSpec g{5.0, 64, 0.1, 0.5, 8};
  const auto rep = pde_residual(sampler, q, zero_laws(), g, 1e-6);
  CHECK(rep.max_abs == 0.0);
}

TEST_CASE("free dispersion of a gaussian matches the closed form") {
  // i psi_t = psi_xx (a = -1), psi0 = exp(-x^2/2):
  // psi(x,t) = exp(-x^2/(2(1-2it)))/sqrt(1-2it).
  const auto q = characteristic::free_particle(2.0);
  const int N = 512;
  const double L = 25.0;
  std::vector<complex<double>> psi0(N);
  for (int i = 0; i < N; ++i) {
    const double x = -L + 2.0 * L * i / N;
    psi0[i] = std::exp(-0.5 * x * x);
  }
  PropagateOptions opt;
  opt.dt = 1e-3;
  const auto grid = split_step_propagate(psi0, q, zero_laws(), L, 0.0, 1.0, opt);
  std::vector<complex<double>> exact(N);
  const complex<double> den{1.0, -2.0};
  for (int i = 0; i < N; ++i) {
    const double x = grid.x[i];
    exact[i] = std::exp(-x * x / (2.0 * den)) / std::sqrt(den);
  }
  CHECK(l2_relative_error(grid.slice(grid.t.size() - 1), exact) < 1e-10);
}

TEST_CASE("norm conservation of the nonlinear step") {
  const auto sc = scenario::find_catalog_scenario("free-bright");
  const auto sol = scenario::build_solution(sc);
  const auto laws = assembler::make_balance_laws(sol);
  const int N = 512;
  const double L = 22.0;
  std::vector<complex<double>> psi0(N);
  const auto s0 = sol.state_at(0.0);
  for (int i = 0; i < N; ++i) psi0[i] = sol.psi(-L + 2.0 * L * i / N, s0);
  PropagateOptions opt;
  opt.dt = 5e-4;
  const auto grid = split_step_propagate(psi0, sol.coeffs(), laws, L, 0.0, 1.0, opt);
  const double dx = 2.0 * L / N;
  const double n0 = discrete_l2(psi0, dx);
  const double n1 = discrete_l2(grid.slice(grid.t.size() - 1), dx);
  CHECK(std::abs(n1 - n0) / n0 < 1e-10);
}

TEST_CASE("gauged norm with loss: e^(Lambda) ||psi|| is conserved") {
  const auto sc = scenario::find_catalog_scenario("fiber-retimed");
  const auto sol = scenario::build_solution(sc);
  const auto laws = assembler::make_balance_laws(sol);
  const int N = 512;
  const double L = 22.0;
  std::vector<complex<double>> psi0(N);
  const auto s0 = sol.state_at(0.0);
  for (int i = 0; i < N; ++i) psi0[i] = sol.psi(-L + 2.0 * L * i / N, s0);
  PropagateOptions opt;
  opt.dt = 5e-4;
  const double t_end = 0.5;
  const auto grid = split_step_propagate(psi0, sol.coeffs(), laws, L, 0.0, t_end, opt);
  const double dx = 2.0 * L / N;
  const double d0 = sc.coeff.d0;
  const double gauged0 = discrete_l2(psi0, dx);
  const double gauged1 =
      std::exp(d0 * t_end) * discrete_l2(grid.slice(grid.t.size() - 1), dx);
  CHECK(std::abs(gauged1 - gauged0) / gauged0 < 1e-9);

  // And the evolved field still tracks the closed-form solution.
  const auto send = sol.state_at(t_end);
  std::vector<complex<double>> exact(N);
  for (int i = 0; i < N; ++i) exact[i] = sol.psi(grid.x[i], send);
  CHECK(l2_relative_error(grid.slice(grid.t.size() - 1), exact) < 1e-4);
}

TEST_CASE("second-order convergence in dt") {
  const auto sc = scenario::find_catalog_scenario("free-bright");
  const auto sol = scenario::build_solution(sc);
  const auto laws = assembler::make_balance_laws(sol);
  const int N = 512;
  const double L = 22.0;
  std::vector<complex<double>> psi0(N);
  const auto s0 = sol.state_at(0.0);
  for (int i = 0; i < N; ++i) psi0[i] = sol.psi(-L + 2.0 * L * i / N, s0);

  auto run = [&](double dt) {
    PropagateOptions opt;
    opt.dt = dt;
    const auto g = split_step_propagate(psi0, sol.coeffs(), laws, L, 0.0, 0.25, opt);
    return g.slice(g.t.size() - 1);
  };
  const auto ref = run(2.5e-4);
  const double e1 = l2_relative_error(run(2e-3), ref);
  const double e2 = l2_relative_error(run(1e-3), ref);
  const double ratio = e1 / e2;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("dilation term is rejected") {
  auto q = characteristic::custom(
      characteristic::TimeFunction::constant(-1.0), characteristic::TimeFunction::zero(),
      characteristic::TimeFunction::constant(0.1), characteristic::TimeFunction::zero(),
      characteristic::TimeFunction::zero(), characteristic::TimeFunction::zero(), 2.0, "c-on");
  std::vector<complex<double>> psi0(64, {0.0, 0.0});
  psi0[32] = 1e-12;
  CHECK_THROWS_AS(split_step_propagate(psi0, q, zero_laws(), 10.0, 0.0, 0.1, {}),
                  UnsupportedRegimeError);
}

TEST_CASE("stability guard rejects oversized steps") {
  const auto q = characteristic::free_particle(2.0);
  std::vector<complex<double>> psi0(1024, {0.0, 0.0});
  for (int i = 400; i < 600; ++i) psi0[i] = std::exp(-0.01 * (i - 512) * (i - 512));
  PropagateOptions opt;
  opt.dt = 0.1;  // dt a kmax^2 >> pi at L = 20
  CHECK_THROWS_AS(split_step_propagate(psi0, q, zero_laws(), 20.0, 0.0, 1.0, opt),
                  ConfigError);
}

TEST_CASE("aliasing detection on under-resolved data") {
  const auto q = characteristic::free_particle(2.0);
  const int N = 64;
  const double L = 10.0;
  const double kmax = std::numbers::pi * N / (2.0 * L);
  std::vector<complex<double>> psi0(N);
  for (int i = 0; i < N; ++i) {
    const double x = -L + 2.0 * L * i / N;
    const double ph = 0.8 * kmax * x;
    psi0[i] = std::exp(-0.25 * x * x) * complex<double>{std::cos(ph), std::sin(ph)};
  }
  PropagateOptions opt;
  opt.dt = 1e-4;
  opt.aliasing_check_every = 1;
  CHECK_THROWS_AS(split_step_propagate(psi0, q, zero_laws(), L, 0.0, 0.01, opt),
                  NumericalError);
}

TEST_CASE("non-decaying data: box error without taper, windowed with it") {
  const auto sc = scenario::find_catalog_scenario("free-dark");
  const auto sol = scenario::build_solution(sc);
  const auto laws = assembler::make_balance_laws(sol);
  const int N = 2048;
  const double L = 40.0;
  std::vector<complex<double>> psi0(N);
  const auto s0 = sol.state_at(0.0);
  for (int i = 0; i < N; ++i) psi0[i] = sol.psi(-L + 2.0 * L * i / N, s0);

  PropagateOptions opt;
  opt.dt = 2e-4;
  CHECK_THROWS_AS(split_step_propagate(psi0, sol.coeffs(), laws, L, 0.0, 0.1, opt),
                  ConfigError);

  opt.taper_edges = true;
  const auto grid = split_step_propagate(psi0, sol.coeffs(), laws, L, 0.0, 0.1, opt);
  CHECK(grid.tapered);
  const auto send = sol.state_at(0.1);
  std::vector<complex<double>> exact(N);
  for (int i = 0; i < N; ++i) exact[i] = sol.psi(grid.x[i], send);
  // Compare away from the windowed edges; boundary transients stay outside
  // the central half for this short horizon.
  CHECK(l2_relative_error(grid.slice(grid.t.size() - 1), exact, 0.5) < 1e-3);
}

TEST_CASE("residual cross-check: analytic pulse passes both gates") {
  const auto sc = scenario::find_catalog_scenario("harmonic-bright");
  const auto sol = scenario::build_solution(sc);
  const auto laws = assembler::make_balance_laws(sol);
  GridSpec g{18.0, 128, 0.1, 0.9, 40};
  const auto rep = pde_residual(FieldSampler::of(sol), sol.coeffs(), laws, g, 1e-6);
  CHECK(rep.rel_to_scale < 1e-6);
}

TEST_CASE("corrupting the nonlinearity law by 1% is detected") {
  const auto sc = scenario::find_catalog_scenario("free-bright");
  const auto sol = scenario::build_solution(sc);
  auto laws = assembler::make_balance_laws(sol);
  auto base = laws.h_of_t;
  laws.h_of_t = [base](double t) { return 1.01 * base(t); };
  GridSpec g{18.0, 128, 0.1, 0.5, 24};
  const auto rep = pde_residual(FieldSampler::of(sol), sol.coeffs(), laws, g, 1e-6);
  CHECK(rep.rel_to_scale > 1e-3);
}
