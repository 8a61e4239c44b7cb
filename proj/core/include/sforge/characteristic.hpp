#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sforge/ode.hpp"

namespace sforge::characteristic {

// A time coefficient together with its derivative (analytic for presets,
// 4th-order stencils for tabulated data).
struct TimeFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  bool identically_zero = false;

  double operator()(double t) const { return value(t); }
  double deriv(double t) const { return derivative(t); }

  static TimeFunction constant(double c);
  static TimeFunction zero();
};

// Closed-form characteristic basis, exposed by presets whose equation is
// solvable by hand; used as a cross-check against the numeric solve.
struct ClosedBasis {
  std::function<double(double)> mu0, dmu0, mu1, dmu1;
};

// The six real time coefficients a, b, c, d, f, g of the quadratic
// Hamiltonian, on the domain [0, t_max]. a(t) must not vanish.
struct QuadraticCoefficients {
  TimeFunction a, b, c, d, f, g;
  double t_max = 10.0;
  std::string preset = "custom";
  std::optional<ClosedBasis> closed_basis;

  bool has_linear_terms() const { return !(f.identically_zero && g.identically_zero); }
  bool dilation_free() const { return c.identically_zero; }
  void check_time(double t) const;
};

// Presets. Signs follow the worked forms of each equation; in particular the
// linear-potential plasma preset has a = +1 so that mu0 = 2t reproduces the
// published mu, delta, epsilon, kappa laws.
QuadraticCoefficients free_particle(double t_max);
QuadraticCoefficients harmonic_trap(double t_max);
QuadraticCoefficients fiber_optic(double t_max, double a_mean = -1.0, double a_mod = 0.5,
                                  double a_freq = 1.0, double d0 = 0.05);
QuadraticCoefficients bec_trap(double t_max, std::function<double(double)> omega_sq);
QuadraticCoefficients bec_trap_const(double t_max, double omega);
QuadraticCoefficients plasma_linear(double t_max, double k);

// Tabulated coefficient: two-column (t, value) samples, cubic Hermite
// interpolation with node slopes from centered 4th-order stencils
// (one-sided closures at the ends).
TimeFunction tabulated(std::vector<double> t, std::vector<double> v);
QuadraticCoefficients custom(TimeFunction a, TimeFunction b, TimeFunction c, TimeFunction d,
                             TimeFunction f, TimeFunction g, double t_max,
                             std::string name = "custom");

// Coefficients of the reduced first-order-free form
//   mu'' - tau(t) mu' + 4 sigma(t) mu = 0,
// tau = a'/a - 2c + 4d, sigma = ab - cd + d^2 + (d a'/a - d')/2.
// The d-terms use the expanded combination, regular as d -> 0.
std::pair<double, double> tau_sigma(const QuadraticCoefficients& q, double t);

// Standard basis mu0(0)=0, mu0'(0)=2a(0); mu1(0)=1, mu1'(0)=0.
class CharacteristicBasis {
public:
  double mu0(double t) const { return sol_.eval(t, 0); }
  double dmu0(double t) const { return sol_.eval(t, 1); }
  double mu1(double t) const { return sol_.eval(t, 2); }
  double dmu1(double t) const { return sol_.eval(t, 3); }
  double t_max() const { return sol_.t_end(); }
  double a0() const { return a0_; }
  const std::vector<double>& mesh() const { return sol_.times(); }
  const std::optional<ClosedBasis>& closed_form() const { return closed_; }

private:
  friend CharacteristicBasis solve_basis(const QuadraticCoefficients&, double);
  ode::DenseSolution sol_;
  std::optional<ClosedBasis> closed_;
  double a0_ = 0.0;
};

CharacteristicBasis solve_basis(const QuadraticCoefficients& q, double t_end);

}  // namespace sforge::characteristic
