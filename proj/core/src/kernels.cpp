#include "sforge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sforge/errors.hpp"

namespace sforge::kernels {
namespace {

constexpr double kSmallTime = 1e-6;

double pick_scale(std::initializer_list<double> parts) {
  double s = 0.0;
  for (double p : parts) s = std::max(s, std::abs(p));
  return std::max(s, 1e-300);
}

}  // namespace

namespace {

// Shared helpers for the quadrature closures; everything is captured through
// shared_ptr so the closures survive copies and moves of PhaseKernels.
double checked_dmu0(const CharacteristicBasis& basis, double s) {
  const double dmu0 = basis.dmu0(s);
  if (std::abs(dmu0) < 1e-9 * std::max(1.0, std::abs(2.0 * basis.a0())))
    throw NumericalError(
        "turning point: mu0' vanishes inside the integration range; the linear-term "
        "kernels are not integrable across it");
  return dmu0;
}

double linear_source(const QuadraticCoefficients& q, double s) {
  return q.f(s) - q.d(s) / q.a(s) * q.g(s);
}

}  // namespace

PhaseKernels::PhaseKernels(std::shared_ptr<const QuadraticCoefficients> coeffs,
                           CharacteristicBasis basis)
    : coeffs_(std::move(coeffs)),
      basis_(std::make_shared<const CharacteristicBasis>(std::move(basis))) {
  const auto& q = *coeffs_;
  unit_lambda_ = q.c.identically_zero && q.d.identically_zero;
  zero_linear_ = !q.has_linear_terms();

  std::vector<double> mesh = basis_->mesh();
  if (!unit_lambda_) {
    int_c2d_ = std::make_shared<const quadrature::CumulativeIntegral>(
        [qp = coeffs_](double s) { return qp->c(s) - 2.0 * qp->d(s); }, mesh, 1e-13);
  }
  linear_end_ = basis_->t_max();
  if (!zero_linear_) {
    // The linear-term integrands carry 1/mu0'; stop their mesh before the
    // first turning point and refuse evaluation beyond it.
    const double scale0 = std::max(1.0, std::abs(2.0 * basis_->a0()));
    std::size_t keep = mesh.size();
    for (std::size_t i = 1; i < mesh.size(); ++i) {
      const double prev = basis_->dmu0(mesh[i - 1]);
      const double cur = basis_->dmu0(mesh[i]);
      if ((cur < 0) != (prev < 0) || std::abs(cur) < 1e-6 * scale0) {
        keep = i;
        break;
      }
    }
    if (keep < mesh.size()) {
      // Back away until the endpoint derivative is safely bounded.
      while (keep > 1 && std::abs(basis_->dmu0(mesh[keep - 1])) < 0.05 * scale0) --keep;
      mesh.resize(keep);
      linear_end_ = mesh.back();
    }

    auto lam_of = [c2d = int_c2d_](double s) { return c2d ? std::exp(-(*c2d)(s)) : 1.0; };
    int_delta_ = std::make_shared<const quadrature::CumulativeIntegral>(
        [qp = coeffs_, bp = basis_, lam_of](double s) {
          const double mu0 = bp->mu0(s), dmu0 = bp->dmu0(s);
          return (linear_source(*qp, s) * mu0 + 0.5 * qp->g(s) / qp->a(s) * dmu0) /
                 lam_of(s);
        },
        mesh, 1e-12);
    int_eps_ = std::make_shared<const quadrature::CumulativeIntegral>(
        [qp = coeffs_, bp = basis_, lam_of, id = int_delta_](double s) {
          const double sigma = characteristic::tau_sigma(*qp, s).second;
          const double a = qp->a(s);
          const double dmu0 = checked_dmu0(*bp, s);
          const double lam = lam_of(s);
          const double mu0delta0 = lam * (*id)(s);
          return 8.0 * a * sigma * lam * mu0delta0 / (dmu0 * dmu0) +
                 2.0 * a * lam * linear_source(*qp, s) / dmu0;
        },
        mesh, 1e-12);
    int_kap_ = std::make_shared<const quadrature::CumulativeIntegral>(
        [qp = coeffs_, bp = basis_, lam_of, id = int_delta_](double s) {
          const double sigma = characteristic::tau_sigma(*qp, s).second;
          const double a = qp->a(s);
          const double dmu0 = checked_dmu0(*bp, s);
          const double mu0delta0 = lam_of(s) * (*id)(s);
          return 4.0 * a * sigma * mu0delta0 * mu0delta0 / (dmu0 * dmu0) +
                 2.0 * a * mu0delta0 * linear_source(*qp, s) / dmu0;
        },
        mesh, 1e-12);
  }
}

void PhaseKernels::require_positive_time(double t) const {
  if (t <= 0.0)
    throw PoleError("phase kernel has a simple pole at t = 0 (mu0(0) = 0)", t);
  if (t > t_max()) throw std::out_of_range("phase kernel evaluated beyond basis range");
}

double PhaseKernels::lambda(double t) const {
  if (unit_lambda_) return 1.0;
  return std::exp(-(*int_c2d_)(t));
}

double PhaseKernels::alpha0(double t) const {
  require_positive_time(t);
  const double a = coeffs_->a(t);
  return basis_->dmu0(t) / (4.0 * a * basis_->mu0(t)) - coeffs_->d(t) / (2.0 * a);
}

double PhaseKernels::beta0(double t) const {
  require_positive_time(t);
  return -lambda(t) / basis_->mu0(t);
}

double PhaseKernels::mu0_gamma0(double t) const {
  // mu1(0) = 1 normalization.
  return 0.5 * basis_->mu1(t) + basis_->mu0(t) * coeffs_->d(0.0) / (2.0 * basis_->a0());
}

double PhaseKernels::gamma0(double t) const {
  require_positive_time(t);
  return mu0_gamma0(t) / basis_->mu0(t);
}

double PhaseKernels::integral_delta(double t) const {
  if (zero_linear_) return 0.0;
  return (*int_delta_)(t);
}

void PhaseKernels::require_linear_range(double t) const {
  if (t > linear_end_)
    throw NumericalError(
        "turning point: mu0' vanishes at t = " + std::to_string(linear_end_) +
        "; the linear-term kernels are not integrable beyond it");
}

double PhaseKernels::delta0(double t) const {
  if (zero_linear_) return 0.0;
  if (t == 0.0) return coeffs_->g(0.0) / (2.0 * basis_->a0());
  require_positive_time(t);
  require_linear_range(t);
  return lambda(t) * (*int_delta_)(t) / basis_->mu0(t);
}

double PhaseKernels::epsilon0(double t) const {
  if (zero_linear_) return 0.0;
  if (t == 0.0) return -coeffs_->g(0.0) / (2.0 * basis_->a0());
  require_positive_time(t);
  require_linear_range(t);
  return -2.0 * coeffs_->a(t) * lambda(t) / checked_dmu0(*basis_, t) * delta0(t) +
         (*int_eps_)(t);
}

double PhaseKernels::kappa0(double t) const {
  if (zero_linear_) return 0.0;
  if (t == 0.0) return 0.0;
  require_positive_time(t);
  require_linear_range(t);
  const double d0 = delta0(t);
  return coeffs_->a(t) * basis_->mu0(t) / checked_dmu0(*basis_, t) * d0 * d0 -
         (*int_kap_)(t);
}

PhaseKernels base_kernels(std::shared_ptr<const QuadraticCoefficients> coeffs,
                          CharacteristicBasis basis) {
  return PhaseKernels(std::move(coeffs), std::move(basis));
}

BetaPair beta_two_ways(const PhaseKernels& k, const PhaseState& init, double t) {
  const double kernel_route =
      -init.beta * k.beta0(t) / (2.0 * (init.alpha + k.gamma0(t)));
  const double mu = 2.0 * init.mu * k.basis().mu0(t) * (init.alpha + k.gamma0(t));
  const double mu_route = init.beta * init.mu * k.lambda(t) / mu;
  return {kernel_route, mu_route};
}

PhaseState propagate(const PhaseKernels& k, const PhaseState& init, double t, double g0) {
  if (t < 0.0 || t > k.t_max())
    throw std::out_of_range("propagate: t outside [0, t_max]");
  if (t == 0.0) {
    PhaseState s = init;
    s.t = 0.0;
    s.xi = 0.0;
    return s;
  }

  const auto& q = k.coeffs();
  const auto& basis = k.basis();
  const double mu0 = basis.mu0(t);
  const double dmu0 = basis.dmu0(t);
  const double P = k.mu0_gamma0(t);
  const double lam = k.lambda(t);
  const double a = q.a(t);

  // Dhat = mu0 (alpha(0) + gamma0(t)); caustics are its zeros.
  const double Dhat = mu0 * init.alpha + P;
  if (std::abs(Dhat) < 1e-12 * pick_scale({mu0 * init.alpha, P, 1.0}))
    throw FocalPointError("focal point: mu(t) = 0, the solution's validity interval ends", t);

  PhaseState s;
  s.t = t;
  s.mu = 2.0 * init.mu * Dhat;

  if (t < kSmallTime) {
    // The closed kernel form for alpha is 0/0 as t -> 0; use the phase ODE's
    // own Taylor step, exact to O(t^2) here.
    const double a00 = q.a(0.0), b0 = q.b(0.0), c0 = q.c(0.0);
    s.alpha = init.alpha -
              t * (b0 + 2.0 * c0 * init.alpha + 4.0 * a00 * init.alpha * init.alpha);
  } else if (std::abs(mu0) < 1e-9 * std::max(1.0, std::abs(dmu0) * t)) {
    // Interior zero of mu0: removable 0/0 point of the alpha formula; nudge.
    const double tn = t + 1e-7;
    const double m = basis.mu0(tn), dm = basis.dmu0(tn);
    const double Dh = m * init.alpha + k.mu0_gamma0(tn);
    const double lm = k.lambda(tn), an = q.a(tn);
    s.alpha = (dm * Dh - an * lm * lm) / (4.0 * an * m * Dh) - q.d(tn) / (2.0 * an);
  } else {
    const double N = dmu0 * Dhat - a * lam * lam;
    s.alpha = N / (4.0 * a * mu0 * Dhat) - q.d(t) / (2.0 * a);
  }

  s.beta = init.beta * lam / (2.0 * Dhat);
  s.gamma = init.gamma - init.beta * init.beta * mu0 / (4.0 * Dhat);

  const double eps0 = k.epsilon0(t);
  const double dplus = init.delta + eps0;
  s.delta = k.delta0(t) + lam * dplus / (2.0 * Dhat);
  s.epsilon = init.epsilon - init.beta * dplus * mu0 / (2.0 * Dhat);
  s.kappa = init.kappa + k.kappa0(t) - dplus * dplus * mu0 / (4.0 * Dhat);
  s.xi = g0 * (init.gamma - s.gamma);

  if (t >= kSmallTime && std::abs(mu0) > 1e-8 * std::max(1.0, std::abs(dmu0) * t)) {
    const auto both = beta_two_ways(k, init, t);
    const double sc = std::max(std::abs(both.kernel_route), std::abs(both.mu_route));
    if (sc > 0 && std::abs(both.kernel_route - both.mu_route) > 1e-10 * sc)
      throw NumericalError("propagate: the two closed forms of beta disagree beyond 1e-10");
  }
  return s;
}

double RiccatiReport::worst() const {
  double w = 0.0;
  for (double r : max_rel) w = std::max(w, r);
  return w;
}

namespace {

struct ResidualPass {
  std::array<double, RiccatiReport::kEquations> max_abs{};
  std::array<double, RiccatiReport::kEquations> scale{};
};

// Residuals with stencil step `stride`, evaluated at points i = 4, 4+step,
// ... (the interior shared by the stride-1 and stride-2 stencils, so the two
// passes are comparable point by point).
ResidualPass residual_pass(std::span<const PhaseState> st, const QuadraticCoefficients& q,
                           std::size_t stride, std::size_t step) {
  ResidualPass out;
  out.scale.fill(1e-300);
  const double h = (st[stride].t - st[0].t);
  const std::size_t n = st.size();
  auto d4 = [&](auto field, std::size_t i) {
    return (-field(st[i + 2 * stride]) + 8.0 * field(st[i + stride]) -
            8.0 * field(st[i - stride]) + field(st[i - 2 * stride])) /
           (12.0 * h);
  };
  for (std::size_t i = 2 * std::max(stride, step); i + 2 * std::max(stride, step) < n;
       i += step) {
    const PhaseState& s = st[i];
    const double a = q.a(s.t), b = q.b(s.t), c = q.c(s.t);
    const double f = q.f(s.t), g = q.g(s.t);
    const double dalpha = d4([](const PhaseState& p) { return p.alpha; }, i);
    const double dbeta = d4([](const PhaseState& p) { return p.beta; }, i);
    const double dgamma = d4([](const PhaseState& p) { return p.gamma; }, i);
    const double ddelta = d4([](const PhaseState& p) { return p.delta; }, i);
    const double deps = d4([](const PhaseState& p) { return p.epsilon; }, i);
    const double dkappa = d4([](const PhaseState& p) { return p.kappa; }, i);

    const double terms[RiccatiReport::kEquations][4] = {
        {dalpha, b, 2 * c * s.alpha, 4 * a * s.alpha * s.alpha},
        {dbeta, (c + 4 * a * s.alpha) * s.beta, 0, 0},
        {dgamma, a * s.beta * s.beta, 0, 0},
        {ddelta, (c + 4 * a * s.alpha) * s.delta, -f, -2 * s.alpha * g},
        {deps, -(g - 2 * a * s.delta) * s.beta, 0, 0},
        {dkappa, -g * s.delta, a * s.delta * s.delta, 0}};
    for (int e = 0; e < RiccatiReport::kEquations; ++e) {
      double r = 0.0;
      for (double term : terms[e]) {
        r += term;
        out.scale[e] = std::max(out.scale[e], std::abs(term));
      }
      out.max_abs[e] = std::max(out.max_abs[e], std::abs(r));
    }
  }
  return out;
}

}  // namespace

RiccatiReport riccati_residuals(std::span<const PhaseState> states,
                                const QuadraticCoefficients& q, double rel_tol) {
  if (states.size() < 9)
    throw DiagnosticsError("riccati_residuals: need at least 9 uniform samples");
  const double h = states[1].t - states[0].t;
  for (std::size_t i = 1; i < states.size(); ++i)
    if (std::abs((states[i].t - states[i - 1].t) - h) > 1e-9 * std::abs(h))
      throw DiagnosticsError("riccati_residuals: trajectory must be uniformly sampled");

  const ResidualPass fine = residual_pass(states, q, 1, 1);
  // Same evaluation points, doubled stencil: a pure-truncation residual grows
  // ~16x, a genuine one stays put.
  const ResidualPass fine_shared = residual_pass(states, q, 1, 2);
  const ResidualPass coarse = residual_pass(states, q, 2, 2);

  // One scale for the whole phase-flow system; a single equation whose terms
  // are all identically zero would otherwise be compared against its own
  // finite-difference noise.
  double scale = 1e-300;
  for (double s : fine.scale) scale = std::max(scale, s);

  // Stencil noise level: residuals below it are certified zero rather than
  // ratioed against other roundoff.
  double field_scale = 1.0;
  for (const auto& s : states)
    field_scale = std::max({field_scale, std::abs(s.alpha), std::abs(s.beta),
                            std::abs(s.gamma), std::abs(s.delta), std::abs(s.epsilon),
                            std::abs(s.kappa)});
  const double noise_floor =
      100.0 * std::numeric_limits<double>::epsilon() * field_scale / std::abs(h);

  RiccatiReport rep;
  rep.names = {"alpha-riccati", "beta-transport", "gamma-drift",
               "delta-transport", "epsilon-drift", "kappa-drift"};
  for (int e = 0; e < RiccatiReport::kEquations; ++e) {
    const double rel = fine.max_abs[e] <= noise_floor ? 0.0 : fine.max_abs[e] / scale;
    rep.max_rel[e] = rel;
    const double growth =
        coarse.max_abs[e] / std::max(fine_shared.max_abs[e], noise_floor);
    if (rel > rel_tol && growth > 6.0)
      throw DiagnosticsError(std::string("riccati_residuals: sampling too coarse for ") +
                             rep.names[e] + " at the requested tolerance");
  }
  return rep;
}

}  // namespace sforge::kernels
