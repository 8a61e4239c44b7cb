#include "sforge/feshbach.hpp"

#include <cmath>
#include <memory>

#include "sforge/errors.hpp"
#include "sforge/quadrature.hpp"

namespace sforge::feshbach {

double scattering_length_ratio(double B, const FeshbachParams& p) {
  if (B == p.B0)
    throw PoleError("scattering length diverges at the resonance center B0", B);
  return p.a_inf * (1.0 + p.Delta0 / (p.B0 - B));
}

double tuning_field(double mu_t, double Lambda_t, const SolitonConstants& sc,
                    const FeshbachParams& p) {
  const double eL = std::exp(Lambda_t);
  const double den = 4.0 * p.a_inf * eL * mu_t - sc.h0 * sc.beta0 * sc.beta0 * sc.mu0 * sc.mu0;
  const double scale =
      std::max({std::abs(4.0 * p.a_inf * eL * mu_t),
                std::abs(sc.h0 * sc.beta0 * sc.beta0 * sc.mu0 * sc.mu0), 1e-300});
  if (std::abs(den) < 1e-12 * scale)
    throw PoleError("tuning field has a pole here: the synchronization denominator vanished",
                    mu_t);
  return p.B0 + 4.0 * p.a_inf * p.Delta0 * eL * mu_t / den;
}

std::function<double(double)> kappa_balance_law(const SolitonConstants& sc,
                                                std::function<double(double)> mu) {
  const double num = sc.h0 * sc.beta0 * sc.beta0 * sc.mu0 * sc.mu0;
  auto m = std::make_shared<std::function<double(double)>>(std::move(mu));
  return [num, m](double tau) { return num / (2.0 * (*m)(tau)); };
}

std::function<double(double)> g_balance_law(double g0, const SolitonConstants& sc,
                                            std::function<double(double)> mu) {
  const double num = g0 * sc.beta0 * sc.beta0 * sc.mu0 * sc.mu0;
  auto m = std::make_shared<std::function<double(double)>>(std::move(mu));
  return [num, m](double tau) {
    const double v = (*m)(tau);
    return num / (2.0 * v * v);
  };
}

double trap_frequency_sq_from_mu(const std::function<double(double)>& mu, double t, double h) {
  const double m0 = mu(t);
  if (std::abs(m0) < 1e-12)
    throw FocalPointError("trap_frequency_sq_from_mu: mu(t) = 0", t);
  const double mpp = (-mu(t + 2 * h) + 16.0 * mu(t + h) - 30.0 * m0 + 16.0 * mu(t - h) -
                      mu(t - 2 * h)) /
                     (12.0 * h * h);
  return -mpp / m0;
}

ReducedSystem reduce_gpe(double omega_perp, std::function<double(double)> omega0_sq_lab,
                         std::function<double(double)> eta_lab, double tau_max, double hbar,
                         double mass) {
  if (!(omega_perp > 0.0)) throw std::domain_error("reduce_gpe: omega_perp must be positive");
  ReducedSystem rs;
  rs.a_perp = std::sqrt(hbar / (mass * omega_perp));

  auto w2lab = std::make_shared<std::function<double(double)>>(std::move(omega0_sq_lab));
  rs.omega_ratio_sq = [w2lab, omega_perp](double tau) {
    return (*w2lab)(tau / omega_perp) / (omega_perp * omega_perp);
  };

  // Lambda(tau) = int_0^{tau/omega_perp} eta(s) ds, evaluated in reduced time.
  auto eta = std::make_shared<std::function<double(double)>>(std::move(eta_lab));
  std::vector<double> nodes;
  const int nn = 512;
  for (int i = 0; i <= nn; ++i) nodes.push_back(tau_max * i / nn);
  auto cum = std::make_shared<quadrature::CumulativeIntegral>(
      [eta, omega_perp](double tau) { return (*eta)(tau / omega_perp) / omega_perp; }, nodes,
      1e-13);
  rs.Lambda = [cum](double tau) { return (*cum)(tau); };

  rs.coeffs = characteristic::bec_trap(tau_max, rs.omega_ratio_sq);
  return rs;
}

}  // namespace sforge::feshbach
