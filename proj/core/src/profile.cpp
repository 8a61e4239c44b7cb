#include "sforge/profile.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sforge/errors.hpp"
#include "sforge/specfun.hpp"

namespace sforge::profile {

using std::numbers::pi;

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::GeneralCn: return "cn";
    case ProfileKind::GeneralSn: return "sn";
    case ProfileKind::Bright: return "bright";
    case ProfileKind::Dark: return "dark";
    case ProfileKind::PainleveII: return "painleve2";
  }
  return "?";
}

double Painleve2Solution::w(double zeta) const {
  if (zeta < zeta_min_ || zeta > zeta_max_)
    throw std::out_of_range("Painleve2Solution: zeta outside tabulated range");
  return sol_.eval(zeta, 0);
}

double Painleve2Solution::w_prime(double zeta) const {
  if (zeta < zeta_min_ || zeta > zeta_max_)
    throw std::out_of_range("Painleve2Solution: zeta outside tabulated range");
  return sol_.eval(zeta, 1);
}

double Painleve2Solution::s(double zeta) const {
  const double az = std::abs(zeta);
  return (2.0 / 3.0) * az * std::sqrt(az) - 0.75 * r_ * r_ * std::log(az);
}

double Painleve2Solution::s_prime(double zeta) const {
  // d s / d|zeta|
  const double az = std::abs(zeta);
  return std::sqrt(az) - 0.75 * r_ * r_ / az;
}

Painleve2Solution solve_painleve2(double k, double zeta_min, double zeta_max) {
  if (!(std::abs(k) > 0.0 && std::abs(k) < 1.0))
    throw std::domain_error("solve_painleve2: need 0 < |k| < 1 for the bounded family");
  if (zeta_max < 8.0)
    throw std::domain_error("solve_painleve2: seed point must lie at zeta_max >= 8");
  if (zeta_min < -40.0)
    throw std::domain_error("solve_painleve2: tabulation limited to zeta_min >= -40");

  const auto seed = specfun::airy(zeta_max);
  const double y0[2] = {k * seed.ai, k * seed.ai_prime};

  ode::Options opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-14;
  // Small cap keeps the quintic dense output near machine accuracy so the
  // second-difference ODE residual check downstream stays meaningful.
  opt.max_step = 4e-3;
  opt.blowup_guard = 5.0;
  const std::pair<int, int> pairs[] = {{0, 1}};

  Painleve2Solution out;
  out.k_ = k;
  out.zeta_min_ = zeta_min;
  out.zeta_max_ = zeta_max;
  out.r_ = std::sqrt(-std::log1p(-k * k) / pi);
  const double r2 = out.r_ * out.r_;
  out.theta0_ = 1.5 * r2 * std::log(2.0) +
                std::arg(std::exp(specfun::log_gamma({1.0, -0.5 * r2}))) +
                0.25 * pi * (1.0 - 2.0 * (k > 0 ? 1.0 : -1.0));
  try {
    out.sol_ = ode::integrate(
        2,
        [](double zeta, std::span<const double> y, std::span<double> dy) {
          dy[0] = y[1];
          dy[1] = zeta * y[0] + 2.0 * y[0] * y[0] * y[0];
        },
        y0, zeta_max, zeta_min, opt, pairs);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("solve_painleve2: integration blow-up, seed off the "
                                     "bounded manifold (") +
                         e.what() + ")");
  }
  return out;
}

namespace {

std::string regime_message(double g0, double h0, double C0) {
  std::ostringstream os;
  os << "no admissible m=0 profile for g0=" << g0 << ", h0=" << h0 << ", C0=" << C0 << ": ";
  if (h0 < 0) {
    if (g0 * g0 - 2 * C0 * h0 <= 0)
      os << "cn form needs g0^2 - 2 C0 h0 > 0";
    else
      os << "cn form needs C0 >= 0 (modulus <= 1 fails)";
  } else if (h0 > 0) {
    if (g0 >= 0)
      os << "sn form needs g0 < 0";
    else if (C0 <= 0)
      os << "sn form needs C0 > 0";
    else
      os << "sn form needs g0^2 - 2 C0 h0 > 0";
  } else {
    os << "h0 = 0 is not a nonlinear profile";
  }
  return os.str();
}

}  // namespace

SolitonProfile build_profile_m0(double g0, double h0, double C0) {
  SolitonProfile p;
  p.m = 0;
  p.g0 = g0;
  p.h0 = h0;
  p.C0 = C0;

  const double scale0 = std::max({std::abs(g0), std::abs(h0), 1.0});
  const double dark_C0 = (h0 != 0.0) ? g0 * g0 / (2.0 * h0) : 0.0;

  if (std::abs(C0) <= 1e-14 * scale0 && h0 < 0 && g0 > 0) {
    p.kind = ProfileKind::Bright;
    p.C0 = 0.0;
    p.amplitude = std::sqrt(2.0 * g0 / -h0);
    p.scale = std::sqrt(g0);
    p.modulus = 1.0;
    return p;
  }
  if (h0 > 0 && g0 < 0 && std::abs(C0 - dark_C0) <= 1e-14 * scale0) {
    p.kind = ProfileKind::Dark;
    p.C0 = dark_C0;
    p.amplitude = std::sqrt(-g0 / h0);
    p.scale = std::sqrt(-g0 / 2.0);
    p.modulus = 1.0;
    return p;
  }

  const double disc = g0 * g0 - 2.0 * C0 * h0;
  if (h0 < 0 && disc > 0 && C0 > 0) {
    // F = A cn(sigma z, kk): quartic matching gives
    //   A^2 = (g0 + sqrt(disc))/(-h0), sigma^2 = sqrt(disc),
    //   kk^2 = (g0 + sqrt(disc))/(2 sqrt(disc)).
    const double rt = std::sqrt(disc);
    p.kind = ProfileKind::GeneralCn;
    p.amplitude = std::sqrt((g0 + rt) / -h0);
    p.scale = std::pow(disc, 0.25);
    p.modulus = std::sqrt((g0 + rt) / (2.0 * rt));
    return p;
  }
  if (h0 > 0 && g0 < 0 && C0 > 0 && disc > 0) {
    // F = A sn(sigma z, kk): the bounded branch oscillates to the smaller
    // quartic root, so
    //   A^2 = (-g0 - sqrt(disc))/h0, sigma^2 = (-g0 + sqrt(disc))/2,
    //   kk^2 = (-g0 - sqrt(disc))/(-g0 + sqrt(disc)).
    const double rt = std::sqrt(disc);
    p.kind = ProfileKind::GeneralSn;
    p.amplitude = std::sqrt((-g0 - rt) / h0);
    p.scale = std::sqrt((-g0 + rt) / 2.0);
    p.modulus = std::sqrt((-g0 - rt) / (-g0 + rt));
    return p;
  }
  throw UnsupportedRegimeError(regime_message(g0, h0, C0));
}

SolitonProfile build_profile_painleve2(double g0, double h0, double k, double zeta_min,
                                       double zeta_max) {
  if (h0 <= 0)
    throw UnsupportedRegimeError(
        "painleve2 profile needs h0 > 0: F = cbrt(g0) sqrt(2/h0) w has no real scaling otherwise");
  if (g0 == 0) throw UnsupportedRegimeError("painleve2 profile needs g0 != 0");
  SolitonProfile p;
  p.m = 1;
  p.g0 = g0;
  p.h0 = h0;
  p.C0 = 0.0;
  p.k_p2 = k;
  p.kind = ProfileKind::PainleveII;
  p.scale = std::cbrt(g0);
  p.amplitude = p.scale * std::sqrt(2.0 / h0);
  p.p2 = std::make_shared<Painleve2Solution>(solve_painleve2(k, zeta_min, zeta_max));
  return p;
}

ProfileValue profile_eval(const SolitonProfile& p, double z) {
  if (!std::isfinite(z)) throw std::domain_error("profile_eval: non-finite argument");
  switch (p.kind) {
    case ProfileKind::Bright: {
      const double sech = 1.0 / std::cosh(p.scale * z);
      const double tanh = std::tanh(p.scale * z);
      return {p.amplitude * sech, -p.amplitude * p.scale * sech * tanh};
    }
    case ProfileKind::Dark: {
      const double tanh = std::tanh(p.scale * z);
      const double sech = 1.0 / std::cosh(p.scale * z);
      return {p.amplitude * tanh, p.amplitude * p.scale * sech * sech};
    }
    case ProfileKind::GeneralCn: {
      const auto j = specfun::jacobi_elliptic(p.scale * z, p.modulus);
      return {p.amplitude * j.cn, -p.amplitude * p.scale * j.sn * j.dn};
    }
    case ProfileKind::GeneralSn: {
      const auto j = specfun::jacobi_elliptic(p.scale * z, p.modulus);
      return {p.amplitude * j.sn, p.amplitude * p.scale * j.cn * j.dn};
    }
    case ProfileKind::PainleveII: {
      const double zeta = p.scale * z;
      const double amp = std::sqrt(2.0 / p.h0);
      return {p.scale * amp * p.p2->w(zeta), p.scale * p.scale * amp * p.p2->w_prime(zeta)};
    }
  }
  throw std::logic_error("profile_eval: bad kind");
}

double first_integral(const SolitonProfile& p, double z) {
  if (p.m != 0)
    throw UnsupportedRegimeError("first_integral: only the m=0 equation integrates to "
                                 "(F')^2 = C0 + g0 F^2 + h0 F^4 / 2");
  const auto v = profile_eval(p, z);
  return v.Fprime * v.Fprime - p.g0 * v.F * v.F - 0.5 * p.h0 * v.F * v.F * v.F * v.F;
}

double SolitonProfile::sup_abs() const {
  switch (kind) {
    case ProfileKind::Bright:
    case ProfileKind::Dark:
    case ProfileKind::GeneralCn:
    case ProfileKind::GeneralSn:
      return amplitude;
    case ProfileKind::PainleveII: {
      double best = 0.0;
      const double lo = p2->zeta_min(), hi = p2->zeta_max();
      for (int i = 0; i <= 4000; ++i) {
        const double zeta = lo + (hi - lo) * i / 4000.0;
        best = std::max(best, std::abs(p2->w(zeta)));
      }
      return std::abs(scale) * std::sqrt(2.0 / h0) * best;
    }
  }
  return 0.0;
}

}  // namespace sforge::profile
