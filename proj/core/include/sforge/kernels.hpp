#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>

#include "sforge/characteristic.hpp"
#include "sforge/quadrature.hpp"

namespace sforge::kernels {

using characteristic::CharacteristicBasis;
using characteristic::QuadraticCoefficients;

// Phase/scale data of the ansatz at one instant. xi carries the accumulated
// g0-gauge, xi(t) = g0 (gamma(0) - gamma(t)); it is zero at t = 0.
struct PhaseState {
  double t = 0.0;
  double mu = 1.0;
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  double kappa = 0.0;
  double xi = 0.0;
};

// Base kernels built from the standard characteristic basis:
//   alpha0 = mu0'/(4 a mu0) - d/(2a)
//   beta0  = -lambda/mu0,  lambda = exp(-int (c - 2d))
//   gamma0 = mu1/(2 mu1(0) mu0) + d(0)/(2 a(0))
// plus the linear-term kernels delta0, epsilon0, kappa0 by cumulative
// Gauss-Kronrod quadrature on the basis mesh. alpha0, beta0, gamma0 have a
// simple pole at t = 0; delta0, epsilon0, kappa0 take their limit values
// g(0)/(2a(0)), -g(0)/(2a(0)), 0 there.
class PhaseKernels {
public:
  PhaseKernels(std::shared_ptr<const QuadraticCoefficients> coeffs, CharacteristicBasis basis);

  double lambda(double t) const;
  double alpha0(double t) const;
  double beta0(double t) const;
  double gamma0(double t) const;
  double delta0(double t) const;
  double epsilon0(double t) const;
  double kappa0(double t) const;

  // mu0 * gamma0, regular at t = 0 (value 1/2); the cancelled form all
  // propagation formulas are built on.
  double mu0_gamma0(double t) const;
  // mu0 * delta0 / lambda, the running integral the linear-term kernels share.
  double integral_delta(double t) const;

  const CharacteristicBasis& basis() const { return *basis_; }
  const QuadraticCoefficients& coeffs() const { return *coeffs_; }
  double t_max() const { return basis_->t_max(); }

private:
  void require_positive_time(double t) const;
  void require_linear_range(double t) const;

  // All heavyweight state sits behind shared_ptr so the stored quadrature
  // closures stay valid across copies and moves of the kernel object.
  std::shared_ptr<const QuadraticCoefficients> coeffs_;
  std::shared_ptr<const CharacteristicBasis> basis_;
  bool unit_lambda_ = false;
  bool zero_linear_ = false;
  double linear_end_ = 0.0;  // last time the linear-term kernels are integrable
  std::shared_ptr<const quadrature::CumulativeIntegral> int_c2d_;   // int (c - 2d)
  std::shared_ptr<const quadrature::CumulativeIntegral> int_delta_;  // I_delta
  std::shared_ptr<const quadrature::CumulativeIntegral> int_eps_;   // epsilon0 quadrature part
  std::shared_ptr<const quadrature::CumulativeIntegral> int_kap_;   // kappa0 quadrature part
};

PhaseKernels base_kernels(std::shared_ptr<const QuadraticCoefficients> coeffs,
                          CharacteristicBasis basis);

// Phase data at time t from initial data at t = 0. g0 feeds the xi gauge
// (pass 0 when no constant forcing is attached). Throws FocalPointError at a
// caustic. The two closed forms of beta (kernel ratio and lambda mu(0)/mu)
// are evaluated against each other to 1e-10 as an internal consistency guard.
PhaseState propagate(const PhaseKernels& k, const PhaseState& init, double t, double g0 = 0.0);

struct BetaPair {
  double kernel_route;
  double mu_route;
};
BetaPair beta_two_ways(const PhaseKernels& k, const PhaseState& init, double t);

struct RiccatiReport {
  static constexpr int kEquations = 6;
  std::array<double, kEquations> max_rel{};  // per equation, relative to its largest term
  std::array<const char*, kEquations> names{};
  double worst() const;
};

// Residuals of the six phase ODEs on a uniformly sampled trajectory, with
// derivatives by 4th-order central differences. Throws DiagnosticsError when
// the estimated truncation error dominates a residual above rel_tol.
RiccatiReport riccati_residuals(std::span<const PhaseState> states,
                                const QuadraticCoefficients& q, double rel_tol = 1e-6);

}  // namespace sforge::kernels
