#include "sforge/characteristic.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sforge/errors.hpp"

namespace sforge::characteristic {

TimeFunction TimeFunction::constant(double c) {
  TimeFunction f;
  f.value = [c](double) { return c; };
  f.derivative = [](double) { return 0.0; };
  f.identically_zero = (c == 0.0);
  return f;
}

TimeFunction TimeFunction::zero() { return constant(0.0); }

void QuadraticCoefficients::check_time(double t) const {
  if (t < 0.0 || t > t_max)
    throw std::out_of_range("coefficient evaluation outside [0, t_max]");
}

QuadraticCoefficients free_particle(double t_max) {
  QuadraticCoefficients q;
  q.a = TimeFunction::constant(-1.0);
  q.b = q.c = q.d = q.f = q.g = TimeFunction::zero();
  q.t_max = t_max;
  q.preset = "free-particle";
  q.closed_basis = ClosedBasis{
      [](double t) { return -2.0 * t; }, [](double) { return -2.0; },
      [](double) { return 1.0; }, [](double) { return 0.0; }};
  return q;
}

QuadraticCoefficients harmonic_trap(double t_max) {
  QuadraticCoefficients q;
  q.a = TimeFunction::constant(0.5);
  q.b = TimeFunction::constant(0.5);
  q.c = q.d = q.f = q.g = TimeFunction::zero();
  q.t_max = t_max;
  q.preset = "harmonic-trap";
  q.closed_basis = ClosedBasis{
      [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
      [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); }};
  return q;
}

QuadraticCoefficients fiber_optic(double t_max, double a_mean, double a_mod, double a_freq,
                                  double d0) {
  QuadraticCoefficients q;
  q.a.value = [=](double t) { return a_mean * (1.0 + a_mod * std::sin(a_freq * t)); };
  q.a.derivative = [=](double t) { return a_mean * a_mod * a_freq * std::cos(a_freq * t); };
  q.b = q.c = TimeFunction::zero();
  q.d = TimeFunction::constant(d0);
  q.f = q.g = TimeFunction::zero();
  q.t_max = t_max;
  q.preset = "fiber-optic";
  return q;
}

QuadraticCoefficients bec_trap(double t_max, std::function<double(double)> omega_sq) {
  QuadraticCoefficients q;
  q.a = TimeFunction::constant(0.5);
  auto w2 = std::move(omega_sq);
  q.b.value = [w2](double t) { return 0.5 * w2(t); };
  q.b.derivative = [w2](double t) {
    const double h = 1e-5;
    return 0.5 * (w2(t + h) - w2(t - h)) / (2.0 * h);
  };
  q.c = q.d = q.f = q.g = TimeFunction::zero();
  q.t_max = t_max;
  q.preset = "bec-trap";
  return q;
}

QuadraticCoefficients bec_trap_const(double t_max, double omega) {
  auto q = bec_trap(t_max, [omega](double) { return omega * omega; });
  q.b.derivative = [](double) { return 0.0; };
  if (omega != 0.0) {
    q.closed_basis = ClosedBasis{
        [omega](double t) { return std::sin(omega * t) / omega; },
        [omega](double t) { return std::cos(omega * t); },
        [omega](double t) { return std::cos(omega * t); },
        [omega](double t) { return -omega * std::sin(omega * t); }};
  } else {
    q.closed_basis = ClosedBasis{[](double t) { return t; }, [](double) { return 1.0; },
                                 [](double) { return 1.0; }, [](double) { return 0.0; }};
  }
  return q;
}

QuadraticCoefficients plasma_linear(double t_max, double k) {
  QuadraticCoefficients q;
  q.a = TimeFunction::constant(1.0);
  q.b = q.c = q.d = TimeFunction::zero();
  q.f = TimeFunction::constant(2.0 * k);
  q.g = TimeFunction::zero();
  q.t_max = t_max;
  q.preset = "plasma-linear";
  q.closed_basis = ClosedBasis{
      [](double t) { return 2.0 * t; }, [](double) { return 2.0; },
      [](double) { return 1.0; }, [](double) { return 0.0; }};
  return q;
}

TimeFunction tabulated(std::vector<double> t, std::vector<double> v) {
  if (t.size() != v.size() || t.size() < 5)
    throw ConfigError("tabulated coefficient: need matching columns with >= 5 samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ConfigError("tabulated coefficient: time column must increase");

  const std::size_t n = t.size();
  // Node slopes by 4th-order stencils; uniform spacing is assumed for the
  // interior formula, so resample non-uniform tables before use.
  const double h = t[1] - t[0];
  for (std::size_t i = 2; i < n; ++i)
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ConfigError("tabulated coefficient: uniform time spacing required");

  auto slopes = std::make_shared<std::vector<double>>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s;
    if (i >= 2 && i + 2 < n) {
      s = (-v[i + 2] + 8 * v[i + 1] - 8 * v[i - 1] + v[i - 2]) / (12 * h);
    } else if (i + 4 < n && i < 2) {
      s = (-25 * v[i] + 48 * v[i + 1] - 36 * v[i + 2] + 16 * v[i + 3] - 3 * v[i + 4]) / (12 * h);
    } else {
      s = (25 * v[i] - 48 * v[i - 1] + 36 * v[i - 2] - 16 * v[i - 3] + 3 * v[i - 4]) / (12 * h);
    }
    (*slopes)[i] = s;
  }

  auto ts = std::make_shared<std::vector<double>>(std::move(t));
  auto vs = std::make_shared<std::vector<double>>(std::move(v));

  auto locate = [ts](double x) -> std::size_t {
    const auto& tt = *ts;
    if (x <= tt.front()) return 0;
    if (x >= tt[tt.size() - 2]) return tt.size() - 2;
    const double h0 = tt[1] - tt[0];
    auto i = static_cast<std::size_t>((x - tt.front()) / h0);
    if (i >= tt.size() - 1) i = tt.size() - 2;
    return i;
  };

  TimeFunction out;
  out.value = [ts, vs, slopes, locate](double x) {
    const auto i = locate(x);
    const auto& tt = *ts;
    const double hh = tt[i + 1] - tt[i];
    const double s = (x - tt[i]) / hh;
    const double s2 = s * s, s3 = s2 * s;
    return (*vs)[i] * (1 - 3 * s2 + 2 * s3) + hh * (*slopes)[i] * (s - 2 * s2 + s3) +
           (*vs)[i + 1] * (3 * s2 - 2 * s3) + hh * (*slopes)[i + 1] * (s3 - s2);
  };
  out.derivative = [ts, vs, slopes, locate](double x) {
    const auto i = locate(x);
    const auto& tt = *ts;
    const double hh = tt[i + 1] - tt[i];
    const double s = (x - tt[i]) / hh;
    const double s2 = s * s;
    return ((*vs)[i] * (-6 * s + 6 * s2) + hh * (*slopes)[i] * (1 - 4 * s + 3 * s2) +
            (*vs)[i + 1] * (6 * s - 6 * s2) + hh * (*slopes)[i + 1] * (3 * s2 - 2 * s)) /
           hh;
  };
  return out;
}

QuadraticCoefficients custom(TimeFunction a, TimeFunction b, TimeFunction c, TimeFunction d,
                             TimeFunction f, TimeFunction g, double t_max, std::string name) {
  QuadraticCoefficients q;
  q.a = std::move(a);
  q.b = std::move(b);
  q.c = std::move(c);
  q.d = std::move(d);
  q.f = std::move(f);
  q.g = std::move(g);
  q.t_max = t_max;
  q.preset = std::move(name);
  return q;
}

std::pair<double, double> tau_sigma(const QuadraticCoefficients& q, double t) {
  q.check_time(t);
  const double a = q.a(t);
  if (a == 0.0) throw NumericalError("tau_sigma: a(t) vanished");
  const double ap = q.a.deriv(t);
  const double c = q.c(t), d = q.d(t), dp = q.d.deriv(t), b = q.b(t);
  const double tau = ap / a - 2.0 * c + 4.0 * d;
  const double sigma = a * b - c * d + d * d + 0.5 * (d * ap / a - dp);
  return {tau, sigma};
}

CharacteristicBasis solve_basis(const QuadraticCoefficients& q, double t_end) {
  if (!(t_end > 0.0)) throw ConfigError("solve_basis: need t_end > 0");
  if (t_end > q.t_max) throw std::out_of_range("solve_basis: t_end beyond coefficient domain");
  const double a0 = q.a(0.0);
  if (a0 == 0.0) throw NumericalError("solve_basis: a(0) must be nonzero");

  const double y0[4] = {0.0, 2.0 * a0, 1.0, 0.0};
  ode::Options opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-13;
  opt.max_step = 0.02;
  const std::pair<int, int> pairs[] = {{0, 1}, {2, 3}};

  CharacteristicBasis basis;
  basis.a0_ = a0;
  basis.closed_ = q.closed_basis;
  basis.sol_ = ode::integrate(
      4,
      [&q](double t, std::span<const double> y, std::span<double> dy) {
        const auto [tau, sigma] = tau_sigma(q, t);
        dy[0] = y[1];
        dy[1] = tau * y[1] - 4.0 * sigma * y[0];
        dy[2] = y[3];
        dy[3] = tau * y[3] - 4.0 * sigma * y[2];
      },
      y0, 0.0, t_end, opt, pairs);
  return basis;
}

}  // namespace sforge::characteristic
