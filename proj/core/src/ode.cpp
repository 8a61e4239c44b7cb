#include "sforge/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "sforge/errors.hpp"

namespace sforge::ode {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat, for the embedded 4th-order error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

std::size_t DenseSolution::locate(double t) const {
  // Times are monotone in integration direction; normalize with direction_.
  const double tau = direction_ * t;
  std::size_t lo = 0, hi = times_.size() - 1;
  if (tau <= direction_ * times_.front()) return 0;
  if (tau >= direction_ * times_.back()) return times_.size() - 2;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (direction_ * times_[mid] <= tau)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double DenseSolution::component_at(std::size_t seg, double t, std::size_t comp,
                                   bool derivative) const {
  const double t0 = times_[seg], t1 = times_[seg + 1];
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double* y0 = &values_[seg * dim_];
  const double* y1 = &values_[(seg + 1) * dim_];
  const double* f0 = &derivs_[seg * dim_];
  const double* f1 = &derivs_[(seg + 1) * dim_];

  const double p0 = y0[comp], p1 = y1[comp];
  const double v0 = f0[comp], v1 = f1[comp];
  const int vel = velocity_of_[comp];
  if (vel >= 0) {
    // Quintic Hermite: curvature at the nodes is the stored velocity RHS.
    const double a0 = f0[vel], a1 = f1[vel];
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    if (!derivative) {
      const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
      const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
      const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
      const double K0 = 10 * s3 - 15 * s4 + 6 * s5;
      const double K1 = -4 * s3 + 7 * s4 - 3 * s5;
      const double K2 = 0.5 * s3 - s4 + 0.5 * s5;
      return p0 * H0 + h * v0 * H1 + h * h * a0 * H2 + p1 * K0 + h * v1 * K1 +
             h * h * a1 * K2;
    }
    const double dH0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double dH1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double dH2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
    const double dK0 = 30 * s2 - 60 * s3 + 30 * s4;
    const double dK1 = -12 * s2 + 28 * s3 - 15 * s4;
    const double dK2 = 1.5 * s2 - 4 * s3 + 2.5 * s4;
    return (p0 * dH0 + h * v0 * dH1 + h * h * a0 * dH2 + p1 * dK0 + h * v1 * dK1 +
            h * h * a1 * dK2) /
           h;
  }
  const double s2 = s * s, s3 = s2 * s;
  if (!derivative) {
    const double H0 = 1 - 3 * s2 + 2 * s3;
    const double H1 = s - 2 * s2 + s3;
    const double K0 = 3 * s2 - 2 * s3;
    const double K1 = -s2 + s3;
    return p0 * H0 + h * v0 * H1 + p1 * K0 + h * v1 * K1;
  }
  const double dH0 = -6 * s + 6 * s2;
  const double dH1 = 1 - 4 * s + 3 * s2;
  const double dK0 = 6 * s - 6 * s2;
  const double dK1 = -2 * s + 3 * s2;
  return (p0 * dH0 + h * v0 * dH1 + p1 * dK0 + h * v1 * dK1) / h;
}

void DenseSolution::eval(double t, std::span<double> y_out) const {
  const std::size_t seg = locate(t);
  for (std::size_t i = 0; i < dim_; ++i) y_out[i] = component_at(seg, t, i, false);
}

double DenseSolution::eval(double t, std::size_t component) const {
  return component_at(locate(t), t, component, false);
}

double DenseSolution::eval_derivative(double t, std::size_t component) const {
  return component_at(locate(t), t, component, true);
}

DenseSolution integrate(std::size_t dim, const Rhs& f, std::span<const double> y0,
                        double t0, double t1, const Options& opt,
                        std::span<const std::pair<int, int>> second_order_pairs) {
  if (t1 == t0) throw NumericalError("ode::integrate: empty time interval");
  const double dir = (t1 > t0) ? 1.0 : -1.0;

  DenseSolution sol;
  sol.dim_ = dim;
  sol.t_begin_ = t0;
  sol.t_end_ = t1;
  sol.direction_ = dir;
  sol.velocity_of_.assign(dim, -1);
  for (const auto& [pos, vel] : second_order_pairs) sol.velocity_of_[pos] = vel;

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  std::vector<double> ytmp(dim), ynew(dim);

  double t = t0;
  f(t, y, k1);

  // Initial step size from the scale of y and f.
  double h = opt.initial_step;
  if (h == 0.0) {
    double ynorm = 0.0, fnorm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      ynorm = std::max(ynorm, std::abs(y[i]));
      fnorm = std::max(fnorm, std::abs(k1[i]));
    }
    h = (fnorm > 1e-12) ? 0.01 * std::max(ynorm, 1.0) / fnorm : 1e-3;
    h = std::min(h, std::abs(t1 - t0) / 10.0);
    h = std::max(h, 1e-10);
  }
  h = std::min(h, opt.max_step) * dir;

  sol.times_.push_back(t);
  sol.values_.insert(sol.values_.end(), y.begin(), y.end());
  sol.derivs_.insert(sol.derivs_.end(), k1.begin(), k1.end());

  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps)
      throw NumericalError("ode::integrate: step limit exceeded at t=" + std::to_string(t));
    if (std::abs(h) < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
      throw NumericalError("ode::integrate: step size collapse at t=" + std::to_string(t));
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, ytmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, ynew, k7);  // FSAL

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                             e7 * k7[i]);
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = ei / sc;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      for (std::size_t i = 0; i < dim; ++i) {
        if (!std::isfinite(y[i]) || std::abs(y[i]) > opt.blowup_guard)
          throw NumericalError("ode::integrate: solution blow-up at t=" + std::to_string(t));
      }
      sol.times_.push_back(t);
      sol.values_.insert(sol.values_.end(), y.begin(), y.end());
      sol.derivs_.insert(sol.derivs_.end(), k1.begin(), k1.end());
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
    h *= factor;
    if (std::abs(h) > opt.max_step) h = opt.max_step * dir;
  }
  return sol;
}

}  // namespace sforge::ode
