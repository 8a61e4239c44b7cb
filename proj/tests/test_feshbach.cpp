#include <doctest.h>

#include <cmath>

#include "sforge/errors.hpp"
#include "sforge/feshbach.hpp"
#include "sforge/scenario.hpp"

using namespace sforge;
using namespace sforge::feshbach;

namespace {

// Closed tuning-law fixtures for the constant trap and its zero-frequency
// limit, transcribed once here and nowhere in the library.
double harm_fixture(double tau, double omega, double alpha0, const SolitonConstants& sc,
                    const FeshbachParams& p) {
  const double D = 2.0 * alpha0 * std::sin(omega * tau) + omega * std::cos(omega * tau);
  const double hb = sc.h0 * sc.mu0 * sc.beta0 * sc.beta0;
  return p.B0 + p.Delta0 + omega * hb * p.Delta0 / (4.0 * p.a_inf * D - omega * hb);
}

double lin_fixture(double tau, double alpha0, const SolitonConstants& sc,
                   const FeshbachParams& p) {
  const double hb = sc.h0 * sc.mu0 * sc.beta0 * sc.beta0;
  return p.B0 + p.Delta0 +
         hb * p.Delta0 / (4.0 * p.a_inf * (2.0 * alpha0 * tau + 1.0) - hb);
}

}  // namespace

TEST_CASE("scattering length law: limits, zero crossing and pole") {
  const FeshbachParams p{164.0, 11.0, -2.0};
  CHECK(scattering_length_ratio(1e9, p) == doctest::Approx(p.a_inf).epsilon(1e-6));
  CHECK(scattering_length_ratio(-1e9, p) == doctest::Approx(p.a_inf).epsilon(1e-6));
  CHECK(scattering_length_ratio(p.B0 + p.Delta0, p) == doctest::Approx(0.0));
  CHECK(scattering_length_ratio(p.B0 - p.Delta0, p) == doctest::Approx(2.0 * p.a_inf));
  CHECK_THROWS_AS(scattering_length_ratio(p.B0, p), PoleError);
}

TEST_CASE("round trip: tuning field feeds back to the balance law") {
  const FeshbachParams p{164.0, 11.0, -2.0};
  const SolitonConstants sc{-1.0, 1.1, 1.3};
  for (double tau : {0.1, 0.7, 1.9}) {
    const double mu = 1.0 + 0.3 * std::sin(tau);  // any admissible motion
    const double Lam = 0.1 * tau;                 // nonzero gain integral
    const double B = tuning_field(mu, Lam, sc, p);
    const double lhs = scattering_length_ratio(B, p);
    const double rhs = sc.h0 * sc.beta0 * sc.beta0 * sc.mu0 * sc.mu0 * std::exp(-Lam) /
                       (4.0 * mu);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("tuning field through the pipeline matches the constant-trap fixture") {
  const auto s = scenario::find_catalog_scenario("bec-feshbach-harmonic");
  const auto sol = scenario::build_solution(s);
  const FeshbachParams p{s.fesh->B0, s.fesh->Delta0, s.fesh->a_inf};
  const SolitonConstants sc{sol.profile().h0, sol.init().beta, sol.init().mu};
  const double omega = s.coeff.omega, alpha0 = s.init.alpha;
  double worst = 0;
  for (int i = 0; i <= 100; ++i) {
    const double tau = 0.05 + (1.2 - 0.05) * i / 100.0;
    const double B = tuning_field(sol.state_at(tau).mu, 0.0, sc, p);
    worst = std::max(worst, std::abs(B - harm_fixture(tau, omega, alpha0, sc, p)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("zero-frequency limit of the tuning law") {
  const auto s = scenario::find_catalog_scenario("bec-feshbach-linear");
  const auto sol = scenario::build_solution(s);
  const FeshbachParams p{s.fesh->B0, s.fesh->Delta0, s.fesh->a_inf};
  const SolitonConstants sc{sol.profile().h0, sol.init().beta, sol.init().mu};
  double worst = 0;
  for (int i = 0; i <= 100; ++i) {
    const double tau = 0.05 + (1.5 - 0.05) * i / 100.0;
    const double B = tuning_field(sol.state_at(tau).mu, 0.0, sc, p);
    worst = std::max(worst, std::abs(B - lin_fixture(tau, s.init.alpha, sc, p)));
  }
  CHECK(worst < 1e-8);

  // A nearly static trap reproduces the same limit pointwise.
  auto slow = s;
  slow.coeff.omega = 1e-6;
  const auto sol_slow = scenario::build_solution(slow);
  worst = 0;
  for (int i = 0; i <= 100; ++i) {
    const double tau = 0.05 + (1.5 - 0.05) * i / 100.0;
    const double B = tuning_field(sol_slow.state_at(tau).mu, 0.0, sc, p);
    worst = std::max(worst, std::abs(B - lin_fixture(tau, s.init.alpha, sc, p)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("pole structure: B - B0 - Delta0 has its poles at the denominator zeros") {
  // Choose parameters whose synchronization denominator crosses zero.
  const FeshbachParams p{164.0, 11.0, -2.0};
  const SolitonConstants sc{-1.0, 1.0, 1.0};
  auto mu = [](double tau) { return (0.4 * std::sin(1.3 * tau) + 1.3 * std::cos(1.3 * tau)) / 1.3; };
  auto den = [&](double tau) {
    return 4.0 * p.a_inf * mu(tau) - sc.h0 * sc.beta0 * sc.beta0 * sc.mu0 * sc.mu0;
  };
  // Bracket the denominator zero.
  double lo = 1.2, hi = 1.42;
  REQUIRE(den(lo) * den(hi) < 0);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (den(lo) * den(mid) <= 0 ? hi : lo) = mid;
  }
  const double tau_star = 0.5 * (lo + hi);
  CHECK_THROWS_AS(tuning_field(mu(tau_star), 0.0, sc, p), PoleError);
  // Simple pole: (B - B0 - Delta0) * den is smooth and bounded across it.
  const double prod_l = (tuning_field(mu(tau_star - 1e-3), 0, sc, p) - p.B0 - p.Delta0) *
                        den(tau_star - 1e-3);
  const double prod_r = (tuning_field(mu(tau_star + 1e-3), 0, sc, p) - p.B0 - p.Delta0) *
                        den(tau_star + 1e-3);
  CHECK(prod_l == doctest::Approx(prod_r).epsilon(1e-4));
  CHECK(std::abs(tuning_field(mu(tau_star + 1e-5), 0, sc, p)) > 1e4);
}

TEST_CASE("trap frequency recovered from the classical motion") {
  CHECK(trap_frequency_sq_from_mu([](double t) { return std::cos(t); }, 0.7) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(trap_frequency_sq_from_mu([](double t) { return 1.0 + 0.8 * t; }, 0.9)) <
        1e-9);
  CHECK_THROWS_AS(trap_frequency_sq_from_mu([](double t) { return std::cos(t); },
                                            std::numbers::pi / 2),
                  FocalPointError);
}

TEST_CASE("forward-then-invert recovery of a modulated trap law") {
  scenario::Scenario s = scenario::find_catalog_scenario("bec-feshbach-harmonic");
  s.coeff.omega_law = "cosine";
  s.coeff.om_base = 1.0;
  s.coeff.om_amp = 0.2;
  s.coeff.om_freq = 1.0;
  const auto sol = scenario::build_solution(s);
  auto mu = [&sol](double tau) { return sol.state_at(tau).mu; };
  double worst = 0;
  for (int i = 0; i <= 60; ++i) {
    const double tau = 0.1 + (1.1 - 0.1) * i / 60.0;
    worst = std::max(worst,
                     std::abs(trap_frequency_sq_from_mu(mu, tau) -
                              (1.0 + 0.2 * std::cos(tau))));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("dimensionless reduction bookkeeping") {
  CHECK_THROWS_AS(reduce_gpe(-1.0, [](double) { return 1.0; }, [](double) { return 0.0; },
                             5.0),
                  std::domain_error);

  // Unit trap ratio with no gain.
  auto rs = reduce_gpe(2.0, [](double) { return 4.0; }, [](double) { return 0.0; }, 5.0);
  for (double tau : {0.3, 2.2}) {
    CHECK(rs.omega_ratio_sq(tau) == doctest::Approx(1.0));
    CHECK(rs.Lambda(tau) == doctest::Approx(0.0));
  }
  CHECK(rs.coeffs.a(0.7) == 0.5);
  CHECK(rs.coeffs.b(0.7) == doctest::Approx(0.5));
  CHECK(rs.a_perp == doctest::Approx(1.0 / std::sqrt(2.0)));

  // Constant gain: Lambda(tau) = eta0 tau / omega_perp in reduced time.
  auto rs2 = reduce_gpe(2.0, [](double) { return 0.0; }, [](double) { return 0.3; }, 5.0);
  for (double tau : {0.5, 3.0})
    CHECK(rs2.Lambda(tau) == doctest::Approx(0.3 * tau / 2.0).epsilon(1e-10));
}

TEST_CASE("kappa and g balance laws from the trap motion") {
  const auto s = scenario::find_catalog_scenario("bec-feshbach-harmonic");
  const auto sol = scenario::build_solution(s);
  const SolitonConstants sc{sol.profile().h0, sol.init().beta, sol.init().mu};
  auto mu = [&sol](double tau) { return sol.state_at(tau).mu; };
  auto kap = kappa_balance_law(sc, mu);
  auto gl = g_balance_law(sol.profile().g0, sc, mu);
  const auto laws = assembler::make_balance_laws(sol);
  for (double tau : {0.2, 0.8, 1.2}) {
    CHECK(kap(tau) == doctest::Approx(laws.h_of_t(tau)).epsilon(1e-11));
    CHECK(gl(tau) == doctest::Approx(laws.g_of_xt(0.0, tau)).epsilon(1e-11));
  }
}
