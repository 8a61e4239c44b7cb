#include "sforge/assembler.hpp"

#include <cmath>

#include "sforge/errors.hpp"

namespace sforge::assembler {
namespace {

// First zero of Dhat(t) = mu0(t) alpha(0) + mu0 gamma0(t) on (0, T]; mu is
// proportional to Dhat, so this is the first caustic.
double first_caustic(const PhaseKernels& k, const PhaseState& init, double T) {
  auto dhat = [&](double t) {
    return k.basis().mu0(t) * init.alpha + k.mu0_gamma0(t);
  };
  const int n = 4000;
  double prev_t = 0.0, prev_v = 0.5;  // Dhat(0) = mu1(0)/2 = 1/2
  for (int i = 1; i <= n; ++i) {
    const double t = T * i / n;
    const double v = dhat(t);
    if (v == 0.0) return t;
    if ((v < 0) != (prev_v < 0)) {
      double lo = prev_t, hi = t;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((dhat(mid) < 0) != (prev_v < 0))
          hi = mid;
        else
          lo = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_t = t;
    prev_v = v;
  }
  return T;
}

}  // namespace

SolitonSolution::SolitonSolution(std::shared_ptr<const QuadraticCoefficients> coeffs,
                                 profile::SolitonProfile prof, PhaseState init, double phi,
                                 double y)
    : coeffs_(coeffs),
      kernels_(coeffs, characteristic::solve_basis(*coeffs, coeffs->t_max)),
      init_(init),
      profile_(std::move(prof)),
      phi_(phi),
      y_(y) {
  if (!(init_.mu > 0.0)) throw ConfigError("assemble: initial mu must be positive");
  init_.t = 0.0;
  init_.xi = 0.0;
  validity_end_ = first_caustic(kernels_, init_, coeffs_->t_max);
}

SolitonSolution assemble(std::shared_ptr<const QuadraticCoefficients> coeffs,
                         profile::SolitonProfile prof, PhaseState init, double phi, double y) {
  return SolitonSolution(std::move(coeffs), std::move(prof), init, phi, y);
}

PhaseState SolitonSolution::state_at(double t) const {
  // The validity interval ends at the first caustic; the family is not
  // continued through it.
  if (validity_end_ < coeffs_->t_max && t > validity_end_)
    throw FocalPointError("mu vanishes at the reported caustic time; the solution is not "
                          "continued beyond it",
                          validity_end_);
  const double g0_for_xi = (profile_.m == 0) ? profile_.g0 : 0.0;
  return kernels::propagate(kernels_, init_, t, g0_for_xi);
}

double SolitonSolution::travelling_argument(double x, const PhaseState& s) const {
  return s.beta * x + 2.0 * s.gamma * y_ + s.epsilon;
}

double SolitonSolution::phase(double x, const PhaseState& s) const {
  return s.alpha * x * x + s.beta * x * y_ + s.gamma * y_ * y_ + s.delta * x +
         s.epsilon * y_ + s.kappa + s.xi;
}

std::complex<double> SolitonSolution::psi(double x, const PhaseState& s) const {
  const double z = travelling_argument(x, s);
  const double F = profile::profile_eval(profile_, z).F;
  // |mu|^{-1/2}: the amplitude is correct on negative-mu segments and the
  // phase branch there is reported via mu_negative(), not guessed.
  const double amp = F / std::sqrt(std::abs(s.mu));
  const double S = phase(x, s) + phi_;
  return {amp * std::cos(S), amp * std::sin(S)};
}

std::complex<double> SolitonSolution::psi(double x, double t) const {
  return psi(x, state_at(t));
}

BalanceLaws make_balance_laws(const SolitonSolution& sol) {
  BalanceLaws laws;
  const auto& p = sol.profile();
  laws.m = p.m;
  laws.g0 = p.g0;
  laws.h0 = p.h0;
  laws.forcing_absorbed = (p.m == 0);
  laws.h_of_t = [&sol, h0 = p.h0](double t) {
    const auto s = sol.state_at(t);
    return h0 * sol.coeffs().a(t) * s.beta * s.beta * s.mu;
  };
  laws.g_of_xt = [&sol, g0 = p.g0, m = p.m](double x, double t) {
    const auto s = sol.state_at(t);
    const double zm = (m == 0) ? 1.0 : sol.travelling_argument(x, s);
    return g0 * sol.coeffs().a(t) * s.beta * s.beta * zm;
  };
  return laws;
}

AutonomousReport autonomous_residual(const SolitonSolution& sol, double t0, double t1,
                                     double xi_min, double xi_max, int nt, int nxi) {
  const auto& prof = sol.profile();
  if (prof.m != 0)
    throw UnsupportedRegimeError("autonomous transform: stated for the m = 0 family only");
  const auto& ini = sol.init();
  if (ini.delta != 0.0 || ini.epsilon != 0.0 || ini.kappa != 0.0)
    throw UnsupportedRegimeError(
        "autonomous transform: requires zero linear phase data (delta, epsilon, kappa)");

  // tau = gamma(t) must be monotone: gamma' = -a beta^2, so a must keep sign.
  const double a_lo = sol.coeffs().a(t0), a_mid = sol.coeffs().a(0.5 * (t0 + t1)),
               a_hi = sol.coeffs().a(t1);
  if ((a_lo < 0) != (a_hi < 0) || (a_lo < 0) != (a_mid < 0))
    throw NumericalError(
        "autonomous transform: gamma(t) is not monotone on the window (a changes sign)");

  // chi sampled through the full pipeline, with amplitude and the two gauge
  // phases (alpha x^2 and xi) stripped.
  auto chi = [&sol](double xi, const PhaseState& s) {
    const double x = xi / s.beta;
    const std::complex<double> p = sol.psi(x, s);
    const double strip = -(s.alpha * x * x + s.xi);
    return std::sqrt(std::abs(s.mu)) * p *
           std::complex<double>{std::cos(strip), std::sin(strip)};
  };

  const double ht = 1e-3 * (t1 - t0);
  const double hxi = 5e-3 * (xi_max - xi_min) / 16.0;
  AutonomousReport rep;
  double scale = 1e-300;
  for (int j = 0; j < nt; ++j) {
    const double t = t0 + (t1 - t0) * (j + 0.5) / nt;
    PhaseState st[5];
    for (int o = -2; o <= 2; ++o) st[o + 2] = sol.state_at(t + o * ht);
    const PhaseState& s = st[2];
    const double dgamma = -sol.coeffs().a(t) * s.beta * s.beta;
    for (int i = 0; i < nxi; ++i) {
      const double xi = xi_min + (xi_max - xi_min) * i / (nxi - 1);
      const std::complex<double> c0 = chi(xi, s);
      const std::complex<double> ct =
          (-chi(xi, st[4]) + 8.0 * chi(xi, st[3]) - 8.0 * chi(xi, st[1]) + chi(xi, st[0])) /
          (12.0 * ht);
      const std::complex<double> ctau = ct / dgamma;
      const std::complex<double> cxx =
          (-chi(xi + 2 * hxi, s) + 16.0 * chi(xi + hxi, s) - 30.0 * c0 +
           16.0 * chi(xi - hxi, s) - chi(xi - 2 * hxi, s)) /
          (12.0 * hxi * hxi);
      const std::complex<double> I{0.0, 1.0};
      const std::complex<double> nl = prof.h0 * std::norm(c0) * c0;
      const std::complex<double> R = I * ctau + prof.g0 * c0 + nl - cxx;
      const double mag = std::abs(R);
      scale = std::max({scale, std::abs(ctau), std::abs(prof.g0 * c0), std::abs(nl),
                        std::abs(cxx)});
      if (mag > rep.max_abs) {
        rep.max_abs = mag;
        rep.worst_xi = xi;
        rep.worst_t = t;
      }
    }
  }
  rep.rel_to_scale = rep.max_abs / scale;
  return rep;
}

TrajectoryReport classical_trajectory(const SolitonSolution& sol, double t0, double t1,
                                      int samples, double x0) {
  if (samples < 9) throw ConfigError("classical_trajectory: need at least 9 samples");
  const auto& ini = sol.init();
  const double z0 = ini.beta * x0 + 2.0 * ini.gamma * sol.y() + ini.epsilon;

  TrajectoryReport rep;
  rep.t.resize(samples);
  rep.x.resize(samples);
  std::vector<PhaseState> st(samples);
  const double h = (t1 - t0) / (samples - 1);
  double beta_sign = 0.0;
  for (int i = 0; i < samples; ++i) {
    rep.t[i] = t0 + h * i;
    st[i] = sol.state_at(rep.t[i]);
    if (st[i].beta == 0.0 || (beta_sign != 0.0 && (st[i].beta < 0) != (beta_sign < 0)))
      throw NumericalError("classical_trajectory: beta crosses zero, trajectory undefined");
    beta_sign = st[i].beta;
    rep.x[i] = (z0 - 2.0 * st[i].gamma * sol.y() - st[i].epsilon) / st[i].beta;
    const double z = sol.travelling_argument(rep.x[i], st[i]);
    rep.z_drift = std::max(rep.z_drift, std::abs(z - z0));
  }

  auto d1 = [&](const std::vector<double>& v, int i) {
    return (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
  };
  auto d2 = [&](const std::vector<double>& v, int i) {
    return (-v[i + 2] + 16.0 * v[i + 1] - 30.0 * v[i] + 16.0 * v[i - 1] - v[i - 2]) /
           (12.0 * h * h);
  };
  std::vector<double> beta(samples);
  for (int i = 0; i < samples; ++i) beta[i] = st[i].beta;

  const auto& q = sol.coeffs();
  // Shared scale for both laws so a degenerate (e.g. exactly linear)
  // trajectory is not measured against pure stencil noise.
  double scale = 1e-300;
  for (int i = 2; i + 2 < samples; ++i) {
    const double t = rep.t[i];
    const double a = q.a(t), ap = q.a.deriv(t), c = q.c(t), cp = q.c.deriv(t);
    const double b = q.b(t), f = q.f(t), g = q.g(t), gp = q.g.deriv(t);
    const double xp = d1(rep.x, i), xpp = d2(rep.x, i);
    const double bp = d1(beta, i);

    const double vterms[4] = {xp, bp / beta[i] * rep.x[i],
                              -2.0 * a * beta[i] * sol.y() - 2.0 * a * st[i].delta, g};
    double vres = 0.0;
    for (double v : vterms) {
      vres += v;
      scale = std::max(scale, std::abs(v));
    }
    rep.velocity_residual = std::max(rep.velocity_residual, std::abs(vres));

    // x'' - (a'/a) x' + (4ab - c^2 + c a'/a - c') x = 2af + (a'/a - c) g - g'
    const double aterms[5] = {xpp, -ap / a * xp,
                              (4.0 * a * b - c * c + c * ap / a - cp) * rep.x[i],
                              -2.0 * a * f, -((ap / a - c) * g - gp)};
    double ares = 0.0;
    for (double v : aterms) {
      ares += v;
      scale = std::max(scale, std::abs(v));
    }
    rep.accel_residual = std::max(rep.accel_residual, std::abs(ares));
  }
  rep.velocity_residual /= scale;
  rep.accel_residual /= scale;
  return rep;
}

}  // namespace sforge::assembler
