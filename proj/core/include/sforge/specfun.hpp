#pragma once

#include <complex>

namespace sforge::specfun {

// sn, cn, dn at a common argument; satisfies sn^2+cn^2 = 1 and
// dn^2 + k^2 sn^2 = 1 by construction.
struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

// Complete elliptic integral of the first kind, modulus convention
// K(k) = int_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta), via the
// arithmetic-geometric mean. Requires 0 <= k < 1 (logarithmic singularity
// at k = 1).
double complete_elliptic_k(double k);

// Jacobi elliptic functions of real argument, modulus k in [0, 1].
// Descending Landen/AGM scale with backward phase recurrence; k = 0 and k = 1
// dispatch to the circular and hyperbolic closed forms.
JacobiTriple jacobi_elliptic(double u, double k);

double airy_ai(double x);
double airy_ai_prime(double x);

struct AiryPair {
  double ai;
  double ai_prime;
};
AiryPair airy(double x);

// Principal branch of log Gamma for Re(z) > 0 (Lanczos approximation).
std::complex<double> log_gamma(std::complex<double> z);

}  // namespace sforge::specfun
