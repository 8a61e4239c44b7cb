#include "sforge/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sforge/errors.hpp"

namespace sforge::specfun {
namespace {

using std::numbers::pi;

void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(who) + ": non-finite argument");
}

// ---------------------------------------------------------------------------
// Airy function.
//
// Three regimes, each validated against the defining ODE w'' = x w:
//   |x| <= MACLAURIN_EDGE            Maclaurin series (double precision holds
//                                    because the exponential cancellation
//                                    factor stays below ~1e5 here)
//   x >= ASYMPTOTIC_EDGE_POS,        Poincare asymptotic expansions
//   x <= -ASYMPTOTIC_EDGE_NEG
//   MACLAURIN_EDGE < x < ASYMPTOTIC_EDGE_POS
//                                    Taylor continuation of the ODE marched
//                                    left from the asymptotic anchor; neither
//                                    plain series nor the expansion reaches
//                                    1e-10 in double precision on this strip.
// ---------------------------------------------------------------------------

constexpr double MACLAURIN_EDGE = 4.0;
constexpr double ASYMPTOTIC_EDGE_POS = 9.75;
constexpr double ASYMPTOTIC_EDGE_NEG = 7.0;

// Ai(0) = 3^{-2/3}/Gamma(2/3), Ai'(0) = -3^{-1/3}/Gamma(1/3).
constexpr double AI_AT_ZERO = 0.35502805388781723926;
constexpr double AIP_AT_ZERO = -0.25881940379280679840;

AiryPair airy_maclaurin(double x) {
  // Ai = Ai(0) f + Ai'(0) g with f = 1 + x^3/(2*3) + ..., g = x + x^4/(3*4) + ...
  const double x3 = x * x * x;
  double f_term = 1.0, g_term = x;
  double f = f_term, g = g_term;
  double fp = 0.0, gp = 1.0;  // f' = sum 3k f_k / x, g' = sum (3k+1) g_k / x
  for (int k = 0; k < 80; ++k) {
    const double k3 = 3.0 * k;
    f_term *= x3 / ((k3 + 2.0) * (k3 + 3.0));
    g_term *= x3 / ((k3 + 3.0) * (k3 + 4.0));
    f += f_term;
    g += g_term;
    if (x != 0.0) {
      fp += (k3 + 3.0) * f_term / x;
      gp += (k3 + 4.0) * g_term / x;
    }
    if (std::abs(f_term) < 1e-20 * (std::abs(f) + 1e-300) &&
        std::abs(g_term) < 1e-20 * (std::abs(g) + 1e-300))
      break;
  }
  return {AI_AT_ZERO * f + AIP_AT_ZERO * g, AI_AT_ZERO * fp + AIP_AT_ZERO * gp};
}

// u_k, v_k coefficients of the Poincare expansions.
struct AsymCoeffs {
  std::array<double, 24> u{}, v{};
};
const AsymCoeffs& asym_coeffs() {
  static const AsymCoeffs c = [] {
    AsymCoeffs out;
    out.u[0] = out.v[0] = 1.0;
    for (int k = 1; k < 24; ++k) {
      const double kk = k;
      out.u[k] = out.u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
                 ((2 * kk - 1) * 216.0 * kk);
      out.v[k] = out.u[k] * (6 * kk + 1) / (1 - 6 * kk);
    }
    return out;
  }();
  return c;
}

AiryPair airy_asymptotic_pos(double x) {
  const auto& c = asym_coeffs();
  const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
  double su = 0.0, sv = 0.0, pow = 1.0, prev = 1e300;
  for (int k = 0; k < 24; ++k) {
    const double tu = c.u[k] * pow;
    if (std::abs(tu) > prev) break;  // divergent tail reached
    su += (k % 2 ? -tu : tu);
    sv += (k % 2 ? -c.v[k] * pow : c.v[k] * pow);
    prev = std::abs(tu);
    pow /= zeta;
  }
  const double damp = std::exp(-zeta);
  const double x14 = std::pow(x, 0.25);
  const double ai = damp * su / (2.0 * std::sqrt(pi) * x14);
  const double aip = -damp * x14 * sv / (2.0 * std::sqrt(pi));
  return {ai, aip};
}

AiryPair airy_asymptotic_neg(double x) {
  // x < 0; expansions in zeta = (2/3)|x|^{3/2} about the phase zeta - pi/4.
  const auto& c = asym_coeffs();
  const double ax = -x;
  const double zeta = (2.0 / 3.0) * ax * std::sqrt(ax);
  const double z2 = zeta * zeta;
  double even_u = 0.0, odd_u = 0.0, even_v = 0.0, odd_v = 0.0;
  double pow_even = 1.0, pow_odd = 1.0 / zeta, prev = 1e300;
  for (int k = 0; 2 * k + 1 < 24; ++k) {
    const double tu_e = c.u[2 * k] * pow_even;
    if (std::abs(tu_e) > prev) break;
    even_u += (k % 2 ? -tu_e : tu_e);
    even_v += (k % 2 ? -c.v[2 * k] * pow_even : c.v[2 * k] * pow_even);
    odd_u += (k % 2 ? -c.u[2 * k + 1] * pow_odd : c.u[2 * k + 1] * pow_odd);
    odd_v += (k % 2 ? -c.v[2 * k + 1] * pow_odd : c.v[2 * k + 1] * pow_odd);
    prev = std::abs(tu_e);
    pow_even /= z2;
    pow_odd /= z2;
  }
  const double ph = zeta - 0.25 * pi;
  const double sp = std::sin(ph), cp = std::cos(ph);
  const double x14 = std::pow(ax, 0.25);
  const double ai = (cp * even_u + sp * odd_u) / (std::sqrt(pi) * x14);
  const double aip = x14 * (sp * even_v - cp * odd_v) / std::sqrt(pi);
  return {ai, aip};
}

// Taylor continuation cache on the strip (MACLAURIN_EDGE, ASYMPTOTIC_EDGE_POS):
// anchors every 0.25 seeded at the asymptotic edge and marched leftward with
// the recurrence (n+2)(n+1) a_{n+2} = x0 a_n + a_{n-1} of w'' = x w.
// Marching toward larger |Ai| keeps the relative error of the seed.
struct AiryAnchor {
  double x, w, wp;
};

AiryPair airy_taylor_step(double x0, double w, double wp, double h) {
  std::array<double, 34> a{};
  a[0] = w;
  a[1] = wp;
  for (int n = 0; n + 2 < static_cast<int>(a.size()); ++n) {
    const double prev = (n >= 1) ? a[n - 1] : 0.0;
    a[n + 2] = (x0 * a[n] + prev) / ((n + 2.0) * (n + 1.0));
  }
  double val = 0.0, der = 0.0;
  for (int n = static_cast<int>(a.size()) - 1; n >= 0; --n) {
    val = val * h + a[n];
    if (n >= 1) der = der * h + n * a[n];
  }
  return {val, der};
}

const std::vector<AiryAnchor>& airy_anchors() {
  static const std::vector<AiryAnchor> anchors = [] {
    std::vector<AiryAnchor> out;
    const double step = 0.25;
    double x = ASYMPTOTIC_EDGE_POS;
    AiryPair p = airy_asymptotic_pos(x);
    out.push_back({x, p.ai, p.ai_prime});
    while (x > MACLAURIN_EDGE - 0.3) {
      const AiryPair q = airy_taylor_step(x, out.back().w, out.back().wp, -step);
      x -= step;
      out.push_back({x, q.ai, q.ai_prime});
    }
    return out;
  }();
  return anchors;
}

AiryPair airy_bridge(double x) {
  const auto& anchors = airy_anchors();
  // Anchors descend from ASYMPTOTIC_EDGE_POS in steps of 0.25.
  const double step = 0.25;
  auto idx = static_cast<std::size_t>(std::round((anchors.front().x - x) / step));
  if (idx >= anchors.size()) idx = anchors.size() - 1;
  const AiryAnchor& a = anchors[idx];
  return airy_taylor_step(a.x, a.w, a.wp, x - a.x);
}

}  // namespace

double complete_elliptic_k(double k) {
  if (!std::isfinite(k) || k < 0.0)
    throw std::domain_error("complete_elliptic_k: modulus must be finite and >= 0");
  if (k >= 1.0)
    throw std::domain_error("complete_elliptic_k: K diverges logarithmically as k -> 1");
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  // Quadratic convergence; the cap guards against a 1-ulp stall of |a - b|.
  for (int i = 0; i < 60 && std::abs(a - b) > 1e-15 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (2.0 * a);
}

JacobiTriple jacobi_elliptic(double u, double k) {
  require_finite(u, "jacobi_elliptic");
  if (!std::isfinite(k) || k < 0.0 || k > 1.0)
    throw std::domain_error("jacobi_elliptic: modulus must lie in [0, 1]");

  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  const double kp2 = (1.0 - k) * (1.0 + k);
  if (kp2 < 1e-10) {
    // Hyperbolic limit; the correction terms are O(k'^2) and bounded.
    const double s = std::tanh(u), c = 1.0 / std::cosh(u);
    return {s, c, c};
  }

  // Descending AGM scale.
  std::array<double, 32> an{}, cn_{};
  double a = 1.0, b = std::sqrt(kp2), c = k;
  int n = 0;
  an[0] = a;
  cn_[0] = c;
  while (std::abs(c) > 1e-17 * a && n + 1 < static_cast<int>(an.size())) {
    const double a_next = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = a_next;
    ++n;
    an[n] = a;
    cn_[n] = c;
  }

  double phi = std::ldexp(an[n] * u, n);
  for (int j = n; j >= 1; --j) {
    const double s = std::clamp(cn_[j] / an[j] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (std::asin(s) + phi);
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn from the stable defect form k'^2 + k^2 cn^2 (no cancellation near k=1).
  const double dn = std::sqrt(kp2 + k * k * cn * cn);
  return {sn, cn, dn};
}

double airy_ai(double x) { return airy(x).ai; }
double airy_ai_prime(double x) { return airy(x).ai_prime; }

AiryPair airy(double x) {
  require_finite(x, "airy");
  if (x >= ASYMPTOTIC_EDGE_POS) return airy_asymptotic_pos(x);
  if (x <= -ASYMPTOTIC_EDGE_NEG) return airy_asymptotic_neg(x);
  if (x > MACLAURIN_EDGE) return airy_bridge(x);
  return airy_maclaurin(x);
}

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() <= 0.0)
    throw std::domain_error("log_gamma: implemented for Re(z) > 0 only");
  // Lanczos, g = 7, 9 terms.
  static const double coeff[9] = {
      0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
      771.32342877765313,    -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
  const std::complex<double> zm1 = z - 1.0;
  std::complex<double> acc = coeff[0];
  for (int i = 1; i < 9; ++i) acc += coeff[i] / (zm1 + static_cast<double>(i));
  const std::complex<double> t = zm1 + 7.5;
  return 0.5 * std::log(2.0 * pi) + (zm1 + 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace sforge::specfun
