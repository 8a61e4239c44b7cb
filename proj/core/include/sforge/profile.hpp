#pragma once

#include <memory>
#include <string>

#include "sforge/ode.hpp"

namespace sforge::profile {

enum class ProfileKind { GeneralCn, GeneralSn, Bright, Dark, PainleveII };

const char* to_string(ProfileKind k);

// Bounded one-parameter solution of w'' = zeta w + 2 w^3 asymptotic to
// k Ai(zeta) on the right, r |zeta|^{-1/4} sin(s(zeta) - theta0) on the left.
class Painleve2Solution {
public:
  double k() const { return k_; }
  double r() const { return r_; }
  double theta0() const { return theta0_; }
  double zeta_min() const { return zeta_min_; }
  double zeta_max() const { return zeta_max_; }

  double w(double zeta) const;
  double w_prime(double zeta) const;
  // Left-asymptotic phase s(zeta) = (2/3)|zeta|^{3/2} - (3/4) r^2 ln|zeta|.
  double s(double zeta) const;
  double s_prime(double zeta) const;

private:
  friend Painleve2Solution solve_painleve2(double, double, double);
  double k_ = 0, r_ = 0, theta0_ = 0;
  double zeta_min_ = 0, zeta_max_ = 0;
  ode::DenseSolution sol_;
};

Painleve2Solution solve_painleve2(double k, double zeta_min = -40.0,
                                  double zeta_max = 12.0);

// Travelling-wave profile F solving F'' = g0 z^m F + h0 F^3.
struct SolitonProfile {
  int m = 0;
  double g0 = 0, h0 = 0, C0 = 0;
  ProfileKind kind = ProfileKind::Bright;
  double k_p2 = 0;  // Painleve family parameter, m = 1 only

  // Elliptic-kind parameters from quartic matching: F = amplitude * fn(scale*z, modulus).
  double amplitude = 0, scale = 0, modulus = 0;
  std::shared_ptr<const Painleve2Solution> p2;

  // Largest |F| over the admissible range.
  double sup_abs() const;
};

struct ProfileValue {
  double F;
  double Fprime;
};

// Closed elliptic forms for m = 0; degenerate parameters dispatch to the
// bright (sech) and dark (tanh) limits before the general cn/sn forms.
SolitonProfile build_profile_m0(double g0, double h0, double C0);

// m = 1 family via F(z) = cbrt(g0) sqrt(2/h0) w(z cbrt(g0)); requires h0 > 0.
SolitonProfile build_profile_painleve2(double g0, double h0, double k,
                                       double zeta_min = -40.0, double zeta_max = 12.0);

ProfileValue profile_eval(const SolitonProfile& p, double z);

// (F')^2 - g0 F^2 - h0 F^4 / 2, constant in z for m = 0 (equals C0).
double first_integral(const SolitonProfile& p, double z);

}  // namespace sforge::profile
