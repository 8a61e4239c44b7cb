#pragma once

#include <functional>

#include "sforge/characteristic.hpp"

namespace sforge::feshbach {

// Resonance parameters of the scattering-length law
//   a_s(B)/a0 = a_inf (1 + Delta0/(B0 - B)).
// B and Delta0 in gauss, lengths as ratios to the Bohr radius a0.
struct FeshbachParams {
  double B0 = 0.0;
  double Delta0 = 0.0;
  double a_inf = 0.0;
};

// Initial soliton data entering the synchronization condition.
struct SolitonConstants {
  double h0 = 0.0;
  double beta0 = 0.0;  // beta(0)
  double mu0 = 0.0;    // mu(0)
};

double scattering_length_ratio(double B, const FeshbachParams& p);

// Magnetic field synchronizing the resonance with the trap motion:
//   B(t) = B0 + 4 a_inf Delta0 e^Lambda mu / (4 a_inf e^Lambda mu - h0 beta0^2 mu0^2).
// Feeding B back through the scattering-length law reproduces
// h0 beta0^2 mu0^2 e^{-Lambda} / (4 mu) identically.
double tuning_field(double mu_t, double Lambda_t, const SolitonConstants& sc,
                    const FeshbachParams& p);

// Required nonlinearity and forcing laws of the reduced trap equation,
//   kappa(tau) = h0 beta0^2 mu0^2 / (2 mu(tau)),
//   g(tau)     = g0 beta0^2 mu0^2 / (2 mu(tau)^2).
std::function<double(double)> kappa_balance_law(const SolitonConstants& sc,
                                                std::function<double(double)> mu);
std::function<double(double)> g_balance_law(double g0, const SolitonConstants& sc,
                                            std::function<double(double)> mu);

// Trap frequency recovered from the classical motion, omega^2 = -mu''/mu,
// with mu'' from a 4th-order stencil on the supplied function.
double trap_frequency_sq_from_mu(const std::function<double(double)>& mu, double t,
                                 double h = 2e-3);

// Dimensionless 1D reduction of the cylindrical-trap condensate equation.
// Inputs are laboratory-time laws; outputs live in reduced time tau =
// omega_perp * t with lengths scaled by a_perp = sqrt(hbar/(m omega_perp)).
struct ReducedSystem {
  std::function<double(double)> omega_ratio_sq;  // omega0^2/omega_perp^2 at tau
  std::function<double(double)> Lambda;          // gain integral at tau
  double a_perp = 1.0;
  characteristic::QuadraticCoefficients coeffs;  // a = 1/2, b = omega^2(tau)/2
};

ReducedSystem reduce_gpe(double omega_perp, std::function<double(double)> omega0_sq_lab,
                         std::function<double(double)> eta_lab, double tau_max,
                         double hbar = 1.0, double mass = 1.0);

}  // namespace sforge::feshbach
