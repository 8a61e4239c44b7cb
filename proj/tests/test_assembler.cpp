#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>

#include "sforge/assembler.hpp"
#include "sforge/errors.hpp"
#include "sforge/scenario.hpp"

using namespace sforge;
using namespace sforge::assembler;

namespace {

SolitonSolution make_harmonic_bright(double alpha0 = 0.0) {
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::harmonic_trap(3.0));
  PhaseState ini;
  ini.mu = 1.0;
  ini.alpha = alpha0;
  ini.beta = 1.0;
  ini.gamma = 0.0;
  return assemble(q, profile::build_profile_m0(1, -1, 0), ini, 0.2, 0.4);
}

}  // namespace

TEST_CASE("modulus law: |psi| = |F(z)| / sqrt(mu) everywhere") {
  const auto sol = make_harmonic_bright();
  for (double t : {0.1, 0.6, 1.2}) {
    const auto s = sol.state_at(t);
    for (double x : {-4.0, -0.3, 0.0, 1.7, 5.5}) {
      const double z = sol.travelling_argument(x, s);
      const double expected =
          std::abs(profile::profile_eval(sol.profile(), z).F) / std::sqrt(std::abs(s.mu));
      CHECK(std::abs(sol.psi(x, s)) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("initial data form is recovered as t -> 0+") {
  const auto sol = make_harmonic_bright(0.1);
  const auto& ini = sol.init();
  for (double x : {-2.0, 0.0, 1.3}) {
    const std::complex<double> at0 = sol.psi(x, sol.state_at(0.0));
    const std::complex<double> near0 = sol.psi(x, sol.state_at(1e-5));
    const std::complex<double> near0b = sol.psi(x, sol.state_at(2e-5));
    // Second difference cancels the O(t) drift of the phase; what remains is
    // the continuity defect of the limit.
    CHECK(std::abs(at0 - 2.0 * near0 + near0b) < 1e-6);
    // And the t = 0 state is exactly the supplied data.
    const double S = ini.alpha * x * x + ini.beta * x * sol.y() +
                     ini.gamma * sol.y() * sol.y() + sol.phi();
    const double z = ini.beta * x + 2.0 * ini.gamma * sol.y();
    const double F = profile::profile_eval(sol.profile(), z).F;
    const std::complex<double> expected =
        F / std::sqrt(ini.mu) * std::complex<double>{std::cos(S), std::sin(S)};
    CHECK(std::abs(at0 - expected) < 1e-14);
  }
}

TEST_CASE("amplitude law: sup_x |psi| sqrt(mu) equals sup |F|") {
  const auto sol = make_harmonic_bright();
  const double supF = sol.profile().sup_abs();
  for (double t : {0.1, 0.7, 1.3}) {
    const auto s = sol.state_at(t);
    double sup = 0;
    for (int i = 0; i <= 4000; ++i) {
      const double x = -20.0 + 40.0 * i / 4000.0;
      sup = std::max(sup, std::abs(sol.psi(x, s)));
    }
    CHECK(sup * std::sqrt(std::abs(s.mu)) == doctest::Approx(supF).epsilon(1e-4));
  }
}

TEST_CASE("phase separation: psi e^{-iS} is real") {
  const auto sol = make_harmonic_bright(0.05);
  for (double t : {0.2, 0.9}) {
    const auto s = sol.state_at(t);
    for (double x : {-3.0, 0.4, 2.2}) {
      const double S = sol.phase(x, s) + sol.phi();
      const std::complex<double> r =
          sol.psi(x, s) * std::complex<double>{std::cos(-S), std::sin(-S)};
      CHECK(std::abs(r.imag()) < 1e-12 * std::max(1.0, std::abs(r.real())));
    }
  }
}

TEST_CASE("balance laws of the free pulse match the closed coefficient laws") {
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::free_particle(2.0));
  PhaseState ini;
  ini.mu = 1.3;
  ini.alpha = 0.1;
  ini.beta = 1.2;
  ini.gamma = 0.3;
  const auto sol = assemble(q, profile::build_profile_m0(1, -1, 0.3), ini, 0.0, 0.4);
  const auto laws = make_balance_laws(sol);
  const double g0 = 1, h0 = -1;
  for (double t : {0.15, 0.6, 1.1}) {
    const double D = 1.0 - 4.0 * ini.alpha * t;
    // h(t) = -h0 mu(0) beta0^2 / D and g = -g0 beta0^2 z^m / D^2 for a = -1.
    CHECK(laws.h_of_t(t) ==
          doctest::Approx(-h0 * ini.mu * ini.beta * ini.beta / D).epsilon(1e-11));
    const auto s = sol.state_at(t);
    for (double x : {-1.0, 0.8}) {
      const double z = sol.travelling_argument(x, s);
      const double expected = -g0 * ini.beta * ini.beta * std::pow(z, laws.m) / (D * D);
      CHECK(laws.g_of_xt(x, t) == doctest::Approx(expected).epsilon(1e-11));
    }
  }
  CHECK(laws.forcing_absorbed);
}

TEST_CASE("harmonic trap h-law coefficient") {
  const auto sol = make_harmonic_bright(0.1);
  const auto laws = make_balance_laws(sol);
  for (double t : {0.3, 0.9}) {
    const double D = std::cos(t) + 0.2 * std::sin(t);
    CHECK(laws.h_of_t(t) == doctest::Approx(-1.0 / (2.0 * D)).epsilon(1e-11));
  }
}

TEST_CASE("balance identity h / (a beta^2 mu) = h0 along the flow") {
  const auto sol = make_harmonic_bright(0.07);
  const auto laws = make_balance_laws(sol);
  for (double t : {0.1, 0.5, 1.0, 1.3}) {
    const auto s = sol.state_at(t);
    const double h0_back = laws.h_of_t(t) / (sol.coeffs().a(t) * s.beta * s.beta * s.mu);
    CHECK(h0_back == doctest::Approx(-1.0).epsilon(1e-10));
  }
}

TEST_CASE("travelling argument is constant along the classical trajectory") {
  const auto sol = make_harmonic_bright(0.1);
  const auto rep = classical_trajectory(sol, 0.05, 1.3, 801, 0.7);
  CHECK(rep.z_drift < 1e-8);
  CHECK(rep.velocity_residual < 1e-6);
  CHECK(rep.accel_residual < 1e-6);
}

TEST_CASE("free trajectory with zero chirp is linear in t") {
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::free_particle(2.0));
  PhaseState ini;
  ini.mu = 1.0;
  ini.beta = 1.0;
  const auto sol = assemble(q, profile::build_profile_m0(1, -1, 0), ini, 0.0, 0.5);
  const auto rep = classical_trajectory(sol, 0.1, 1.5, 201);
  // Second difference of a linear function vanishes.
  for (std::size_t i = 1; i + 1 < rep.x.size(); ++i)
    CHECK(std::abs(rep.x[i + 1] - 2 * rep.x[i] + rep.x[i - 1]) < 1e-10);
}

TEST_CASE("caustic time is detected and reported") {
  const auto sol = make_harmonic_bright(0.0);  // mu = cos t
  CHECK(sol.validity_end() == doctest::Approx(std::numbers::pi / 2).epsilon(1e-9));
  try {
    (void)sol.state_at(1.6);
    FAIL("expected FocalPointError");
  } catch (const FocalPointError& e) {
    CHECK(e.time == doctest::Approx(std::numbers::pi / 2).epsilon(1e-6));
  }
}

TEST_CASE("autonomization residual is small for the free bright pulse") {
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::free_particle(2.0));
  PhaseState ini;
  ini.mu = 1.0;
  ini.beta = 1.0;
  const auto sol = assemble(q, profile::build_profile_m0(1, -1, 0), ini, 0.4, 0.3);
  const auto rep = autonomous_residual(sol, 0.05, 0.5, -6, 6);
  CHECK(rep.rel_to_scale < 1e-5);
}

TEST_CASE("autonomization near-identity case: alpha = 0, gamma linear") {
  // Free particle with zero chirp: beta constant, tau = gamma0 + beta0^2 t.
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::free_particle(2.0));
  PhaseState ini;
  ini.mu = 1.0;
  ini.beta = 1.0;
  const auto sol = assemble(q, profile::build_profile_m0(1, -1, 0), ini, 0.0, 0.0);
  const auto s = sol.state_at(0.7);
  CHECK(s.beta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.gamma == doctest::Approx(0.7).epsilon(1e-11));
  const auto rep = autonomous_residual(sol, 0.05, 0.5, -5, 5);
  CHECK(rep.rel_to_scale < 1e-5);
}

TEST_CASE("autonomization rejects linear phase data and m = 1") {
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::free_particle(2.0));
  PhaseState ini;
  ini.mu = 1.0;
  ini.beta = 1.0;
  ini.delta = 0.2;
  const auto sol = assemble(q, profile::build_profile_m0(1, -1, 0), ini, 0.0, 0.3);
  CHECK_THROWS_AS(autonomous_residual(sol, 0.05, 0.5, -5, 5), UnsupportedRegimeError);

  PhaseState ini2;
  ini2.mu = 1.0;
  ini2.beta = 1.0;
  const auto sol2 =
      assemble(q, profile::build_profile_painleve2(1, 1, 0.5, -40, 16), ini2, 0.0, 0.2);
  CHECK_THROWS_AS(autonomous_residual(sol2, 0.05, 0.5, -5, 5), UnsupportedRegimeError);
}

TEST_CASE("assemble validates the initial scale factor") {
  auto q = std::make_shared<characteristic::QuadraticCoefficients>(
      characteristic::free_particle(2.0));
  PhaseState bad;
  bad.mu = -1.0;
  CHECK_THROWS_AS(assemble(q, profile::build_profile_m0(1, -1, 0), bad, 0.0, 0.0),
                  ConfigError);
}
