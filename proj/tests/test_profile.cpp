#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sforge/errors.hpp"
#include "sforge/profile.hpp"
#include "sforge/specfun.hpp"

using namespace sforge;
using namespace sforge::profile;
using std::numbers::pi;

namespace {

// 4th-order second difference on step 1e-3, per the stated residual check.
double ode_residual(const SolitonProfile& p, double z) {
  const double h = 1e-3;
  const double fpp = (-profile_eval(p, z + 2 * h).F + 16 * profile_eval(p, z + h).F -
                      30 * profile_eval(p, z).F + 16 * profile_eval(p, z - h).F -
                      profile_eval(p, z - 2 * h).F) /
                     (12 * h * h);
  const double F = profile_eval(p, z).F;
  const double zm = (p.m == 0) ? 1.0 : z;
  return fpp - p.g0 * zm * F - p.h0 * F * F * F;
}

double max_ode_residual(const SolitonProfile& p, double lo, double hi, int n = 400) {
  double worst = 0;
  for (int i = 0; i <= n; ++i)
    worst = std::max(worst, std::abs(ode_residual(p, lo + (hi - lo) * i / n)));
  return worst;
}

}  // namespace

TEST_CASE("bright and dark limits match their closed forms") {
  const auto bright = build_profile_m0(1, -1, 0);
  CHECK(bright.kind == ProfileKind::Bright);
  for (double z : {-3.0, -0.5, 0.0, 1.2, 4.0})
    CHECK(profile_eval(bright, z).F ==
          doctest::Approx(std::sqrt(2.0) / std::cosh(z)).epsilon(1e-14));
  CHECK(profile_eval(bright, 0).Fprime == 0.0);
  CHECK(profile_eval(bright, 0).F == doctest::Approx(std::sqrt(2.0)));

  const auto dark = build_profile_m0(-1, 1, 0.5);
  CHECK(dark.kind == ProfileKind::Dark);
  for (double z : {-2.0, 0.0, 0.9, 5.0})
    CHECK(profile_eval(dark, z).F ==
          doctest::Approx(std::tanh(z / std::sqrt(2.0))).epsilon(1e-14));
  CHECK(profile_eval(dark, 0).F == 0.0);
  CHECK(profile_eval(dark, 0).Fprime ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));  // sqrt(-g0/h0) sqrt(-g0/2)
}

TEST_CASE("general cn profile satisfies the travelling-wave equation") {
  const auto p = build_profile_m0(1, -1, 0.3);
  CHECK(p.kind == ProfileKind::GeneralCn);
  CHECK(max_ode_residual(p, -10, 10) < 1e-8);
}

TEST_CASE("general sn profile satisfies the travelling-wave equation") {
  const auto p = build_profile_m0(-1, 1, 0.3);
  CHECK(p.kind == ProfileKind::GeneralSn);
  CHECK(profile_eval(p, 0).F == 0.0);
  CHECK(max_ode_residual(p, -10, 10) < 1e-8);
}

TEST_CASE("ODE residual invariant for every kind") {
  CHECK(max_ode_residual(build_profile_m0(1, -1, 0), -10, 10) < 1e-6);
  CHECK(max_ode_residual(build_profile_m0(-1, 1, 0.5), -10, 10) < 1e-6);
  CHECK(max_ode_residual(build_profile_m0(1, -1, 0.3), -10, 10) < 1e-6);
  CHECK(max_ode_residual(build_profile_m0(-1, 1, 0.3), -10, 10) < 1e-6);
  const auto p2 = build_profile_painleve2(1, 1, 0.5);
  CHECK(max_ode_residual(p2, -38, 10) < 1e-6);
}

TEST_CASE("first integral is constant and equals C0") {
  struct Case {
    double g0, h0, C0;
  };
  for (const Case c : {Case{1, -1, 0}, Case{-1, 1, 0.5}, Case{1, -1, 0.3}, Case{-1, 1, 0.3}}) {
    const auto p = build_profile_m0(c.g0, c.h0, c.C0);
    for (double z : {-5.0, -1.1, 0.0, 3.0, 10.0})
      CHECK(first_integral(p, z) == doctest::Approx(c.C0).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS_AS(first_integral(build_profile_painleve2(1, 1, 0.5), 0.0),
                  UnsupportedRegimeError);
}

TEST_CASE("unsupported regimes are rejected with the violated inequality named") {
  CHECK_THROWS_WITH_AS(build_profile_m0(1, 1, 0.0), doctest::Contains("sn form needs g0 < 0"),
                       UnsupportedRegimeError);
  CHECK_THROWS_WITH_AS(build_profile_m0(-1, 1, -0.2), doctest::Contains("C0 > 0"),
                       UnsupportedRegimeError);
  CHECK_THROWS_WITH_AS(build_profile_m0(1, -1, -0.2), doctest::Contains("C0 >= 0"),
                       UnsupportedRegimeError);
  CHECK_THROWS_WITH_AS(build_profile_m0(-1, 1, 10.0),
                       doctest::Contains("g0^2 - 2 C0 h0 > 0"), UnsupportedRegimeError);
  CHECK_THROWS_AS(build_profile_m0(1, 0, 0.2), UnsupportedRegimeError);
  CHECK_THROWS_AS(build_profile_painleve2(1, -1, 0.5), UnsupportedRegimeError);
  CHECK_THROWS_AS(build_profile_painleve2(0, 1, 0.5), UnsupportedRegimeError);
}

TEST_CASE("hyperbolic limits: cn -> sech and sn -> tanh pointwise") {
  // C0 within 1e-6 of the limiting value; agreement windows chosen inside the
  // region where the perturbation growth e^{2 sqrt(g0) z} keeps the gap
  // below 1e-4.
  const auto cn = build_profile_m0(1, -1, 1e-6);
  const auto bright = build_profile_m0(1, -1, 0);
  for (double z : {-4.0, -2.0, -0.5, 0.0, 1.0, 3.0, 4.0})
    CHECK(std::abs(profile_eval(cn, z).F - profile_eval(bright, z).F) < 1e-4);

  const auto sn = build_profile_m0(-1, 1, 0.5 - 1e-6);
  const auto dark = build_profile_m0(-1, 1, 0.5);
  for (double z : {-2.5, -1.0, 0.0, 0.7, 1.8, 2.5})
    CHECK(std::abs(profile_eval(sn, z).F - profile_eval(dark, z).F) < 1e-4);
}

TEST_CASE("painleve2: rejects the trivial and blow-up families") {
  CHECK_THROWS_AS(solve_painleve2(0.0), std::domain_error);
  CHECK_THROWS_AS(solve_painleve2(1.0), std::domain_error);
  CHECK_THROWS_AS(solve_painleve2(-1.2), std::domain_error);
  CHECK_THROWS_AS(solve_painleve2(0.5, -50.0), std::domain_error);
  CHECK_THROWS_AS(solve_painleve2(0.5, -40.0, 6.0), std::domain_error);
}

TEST_CASE("painleve2: seed agreement, amplitude law and boundedness") {
  const auto w = solve_painleve2(0.5, -40, 12);
  const double ai8 = specfun::airy_ai(8.0);
  CHECK(std::abs(w.w(8.0) - 0.5 * ai8) / std::abs(0.5 * ai8) < 1e-6);
  CHECK(w.r() * w.r() == doctest::Approx(-std::log(0.75) / pi).epsilon(1e-15));

  double bound = 0;
  for (int i = 0; i <= 4000; ++i)
    bound = std::max(bound, std::abs(w.w(-40.0 + 52.0 * i / 4000.0)));
  CHECK(bound < 2.0);

  // Envelope |w| |zeta|^{1/4} at the oscillation peaks matches r within 3%.
  std::vector<double> peaks;
  double prev = std::abs(w.w(-30.0));
  double prev2 = std::abs(w.w(-30.001));
  for (double z = -30.0; z < -15.0; z += 1e-3) {
    const double cur = std::abs(w.w(z + 1e-3));
    if (prev > prev2 && prev > cur) peaks.push_back(prev * std::pow(std::abs(z), 0.25));
    prev2 = prev;
    prev = cur;
  }
  CHECK(peaks.size() >= 15);
  for (double p : peaks) CHECK(std::abs(p - w.r()) / w.r() < 0.03);
}

TEST_CASE("painleve2: zero spacing follows the asymptotic phase rate") {
  const auto w = solve_painleve2(0.5, -40, 12);
  std::vector<double> zeros;
  double prev = w.w(-30.0);
  for (double z = -30.0; z < -15.0; z += 5e-4) {
    const double cur = w.w(z + 5e-4);
    if ((cur < 0) != (prev < 0)) {
      double lo = z, hi = z + 5e-4;
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((w.w(mid) < 0) != (prev < 0))
          hi = mid;
        else
          lo = mid;
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  CHECK(zeros.size() >= 15);
  for (std::size_t i = 1; i < zeros.size(); ++i) {
    const double gap = zeros[i] - zeros[i - 1];
    const double mid = 0.5 * (zeros[i] + zeros[i - 1]);
    const double predicted = pi / w.s_prime(mid);
    CHECK(std::abs(gap - predicted) / predicted < 0.05);
  }
}

TEST_CASE("painleve2: asymptotic phase offset locates the zeros") {
  // s(zeta_n) - theta0 = n pi at the zeros, up to the o(|zeta|^{-1/4}) tail.
  const auto w = solve_painleve2(0.5, -40, 12);
  double prev = w.w(-35.0);
  int checked = 0;
  for (double z = -35.0; z < -25.0; z += 5e-4) {
    const double cur = w.w(z + 5e-4);
    if ((cur < 0) != (prev < 0)) {
      const double phase = (w.s(z) - w.theta0()) / pi;
      CHECK(std::abs(phase - std::round(phase)) < 0.02);
      ++checked;
    }
    prev = cur;
  }
  CHECK(checked >= 10);
}

TEST_CASE("painleve2 profile scaling against the family solution") {
  const auto p = build_profile_painleve2(1.7, 2.3, 0.4, -30, 12);
  const double s = std::cbrt(1.7);
  for (double z : {-8.0, -2.0, 0.0, 3.0}) {
    const double expect = s * std::sqrt(2.0 / 2.3) * p.p2->w(z * s);
    CHECK(profile_eval(p, z).F == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK_THROWS_AS(profile_eval(p, 100.0), std::out_of_range);
}

TEST_CASE("negative family parameter flips the phase offset branch") {
  const auto wp = solve_painleve2(0.5, -20, 12);
  const auto wm = solve_painleve2(-0.5, -20, 12);
  CHECK(wm.r() == doctest::Approx(wp.r()));
  CHECK(wm.theta0() != doctest::Approx(wp.theta0()));
  CHECK(wm.w(5.0) == doctest::Approx(-wp.w(5.0)).epsilon(1e-12));
}
