#include "sforge/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sforge/errors.hpp"
#include "sforge/fft.hpp"
#include "sforge/parallel.hpp"
#include "sforge/quadrature.hpp"

namespace sforge::verifier {

using std::complex;
using std::numbers::pi;

FieldSampler FieldSampler::of(const assembler::SolitonSolution& sol) {
  FieldSampler s;
  s.at_time = [&sol](double t) {
    const auto st = sol.state_at(t);
    return [&sol, st](double x) { return sol.psi(x, st); };
  };
  return s;
}

FieldSampler FieldSampler::of_function(std::function<complex<double>(double, double)> f) {
  FieldSampler s;
  auto shared = std::make_shared<decltype(f)>(std::move(f));
  s.at_time = [shared](double t) {
    return [shared, t](double x) { return (*shared)(x, t); };
  };
  return s;
}

namespace {

struct PassResult {
  double max_abs = 0.0;
  double scale = 1e-300;
  double worst_x = 0.0, worst_t = 0.0;
};

PassResult residual_pass(const FieldSampler& psi, const QuadraticCoefficients& q,
                         const BalanceLaws& laws, const GridSpec& grid, double hx, double ht) {
  std::vector<PassResult> partial(grid.nt);
  std::vector<double> tlev(grid.nt);
  for (int j = 0; j < grid.nt; ++j)
    tlev[j] = grid.t0 + (grid.t1 - grid.t0) * (grid.nt == 1 ? 0.0 : double(j) / (grid.nt - 1));

  parallel_for_chunks(static_cast<std::size_t>(grid.nt), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const double t = tlev[j];
      std::function<complex<double>(double)> row[5];
      for (int o = -2; o <= 2; ++o) row[o + 2] = psi.at_time(t + o * ht);
      PassResult& acc = partial[j];
      const double dx = 2.0 * grid.L / grid.N;
      for (int i = 0; i < grid.N; ++i) {
        const double x = -grid.L + dx * i;
        const complex<double> p0 = row[2](x);
        const complex<double> pt =
            (-row[4](x) + 8.0 * row[3](x) - 8.0 * row[1](x) + row[0](x)) / (12.0 * ht);
        const complex<double> pxp = row[2](x + hx), pxm = row[2](x - hx);
        const complex<double> pxpp = row[2](x + 2 * hx), pxmm = row[2](x - 2 * hx);
        const complex<double> px = (-pxpp + 8.0 * pxp - 8.0 * pxm + pxmm) / (12.0 * hx);
        const complex<double> pxx =
            (-pxpp + 16.0 * pxp - 30.0 * p0 + 16.0 * pxm - pxmm) / (12.0 * hx * hx);

        const double a = q.a(t), b = q.b(t), c = q.c(t), d = q.d(t), f = q.f(t), g = q.g(t);
        const double h = laws.h_of_t(t);
        const double gf = laws.forcing_absorbed ? 0.0 : laws.g_of_xt(x, t);
        const complex<double> I{0.0, 1.0};
        const complex<double> terms[9] = {I * pt,
                                          a * pxx,
                                          -b * x * x * p0,
                                          I * c * x * px,
                                          I * d * p0,
                                          f * x * p0,
                                          -I * g * px,
                                          -gf * p0,
                                          -h * std::norm(p0) * p0};
        complex<double> R{0.0, 0.0};
        for (const auto& term : terms) {
          R += term;
          acc.scale = std::max(acc.scale, std::abs(term));
        }
        const double mag = std::abs(R);
        if (mag > acc.max_abs) {
          acc.max_abs = mag;
          acc.worst_x = x;
          acc.worst_t = t;
        }
      }
    }
  });

  PassResult out;
  for (const auto& p : partial) {
    out.scale = std::max(out.scale, p.scale);
    if (p.max_abs > out.max_abs) {
      out.max_abs = p.max_abs;
      out.worst_x = p.worst_x;
      out.worst_t = p.worst_t;
    }
  }
  return out;
}

}  // namespace

ResidualReport pde_residual(const FieldSampler& psi, const QuadraticCoefficients& q,
                            const BalanceLaws& laws, const GridSpec& grid, double tol) {
  if (grid.N < 16 || grid.nt < 2) throw ConfigError("pde_residual: grid too small");
  double hx = std::min(2.0 * grid.L / grid.N, 0.05);
  double ht = std::min({(grid.t1 - grid.t0) / (grid.nt - 1), 0.01, grid.t0 / 4.0});

  ResidualReport rep;
  PassResult pass = residual_pass(psi, q, laws, grid, hx, ht);
  for (int it = 0; it < 6; ++it) {
    const PassResult finer = residual_pass(psi, q, laws, grid, hx / 2, ht / 2);
    const double trunc = std::abs(pass.max_abs - finer.max_abs) / finer.scale;
    const bool plateau = finer.max_abs > 0.9 * pass.max_abs;
    pass = finer;
    hx /= 2;
    ht /= 2;
    rep.refinements = it + 1;
    if (trunc < 0.1 * tol || plateau) break;
    if (it == 5)
      throw DiagnosticsError("pde_residual: stencil refinement cap reached before the "
                             "truncation estimate dropped below tolerance");
  }
  rep.max_abs = pass.max_abs;
  rep.rel_to_scale = pass.max_abs / pass.scale;
  rep.worst_x = pass.worst_x;
  rep.worst_t = pass.worst_t;
  rep.stencil_hx = hx;
  rep.stencil_ht = ht;
  return rep;
}

std::vector<complex<double>> FieldGrid::slice(std::size_t time_index) const {
  const std::size_t n = x.size();
  return {values.begin() + time_index * n, values.begin() + (time_index + 1) * n};
}

double discrete_l2(const std::vector<complex<double>>& v, double dx) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s * dx);
}

double l2_relative_error(const std::vector<complex<double>>& a,
                         const std::vector<complex<double>>& b, double interior_fraction) {
  if (a.size() != b.size()) throw ConfigError("l2_relative_error: size mismatch");
  const std::size_t n = a.size();
  std::size_t lo = 0, hi = n;
  if (interior_fraction < 1.0) {
    const auto margin = static_cast<std::size_t>(0.5 * (1.0 - interior_fraction) * n);
    lo = margin;
    hi = n - margin;
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  if (den == 0.0) throw NumericalError("l2_relative_error: reference norm is zero");
  return std::sqrt(num / den);
}

void apply_edge_taper(std::vector<complex<double>>& v, double fraction) {
  const std::size_t n = v.size();
  const auto w = static_cast<std::size_t>(fraction * n);
  for (std::size_t i = 0; i < w; ++i) {
    const double s = std::sin(0.5 * pi * double(i) / w);
    const double win = s * s;
    v[i] *= win;
    v[n - 1 - i] *= win;
  }
}

FieldGrid split_step_propagate(const std::vector<complex<double>>& psi0,
                               const QuadraticCoefficients& q, const BalanceLaws& laws,
                               double L, double t_start, double t_end,
                               const PropagateOptions& opt) {
  const std::size_t N = psi0.size();
  if (!Fft::is_power_of_two(N) || N < 64)
    throw ConfigError("split_step_propagate: N must be a power of two, >= 64");
  if (!q.dilation_free())
    throw UnsupportedRegimeError(
        "split_step_propagate: the dilation term -icx psi_x is not supported; residual "
        "checking covers c != 0");
  if (!(t_end > t_start)) throw ConfigError("split_step_propagate: need t_end > t_start");

  const auto nsteps = static_cast<long>(std::llround((t_end - t_start) / opt.dt));
  if (nsteps < 1) throw ConfigError("split_step_propagate: dt larger than the time span");
  const double dt = (t_end - t_start) / static_cast<double>(nsteps);

  const auto k = fft_wavenumbers(N, L);
  const double kmax = pi * static_cast<double>(N) / (2.0 * L);
  double amax = 0.0;
  for (int i = 0; i <= 32; ++i)
    amax = std::max(amax, std::abs(q.a(t_start + (t_end - t_start) * i / 32.0)));
  if (dt * amax * kmax * kmax >= pi)
    throw ConfigError("split_step_propagate: dt max|a| kmax^2 < pi stability guard violated");

  std::vector<complex<double>> chi = psi0;
  bool tapered = false;
  {
    double mx = 0.0;
    for (const auto& z : chi) mx = std::max(mx, std::abs(z));
    const double edge = std::max({std::abs(chi[0]), std::abs(chi[1]),
                                  std::abs(chi[N - 1]), std::abs(chi[N - 2])});
    if (edge > 1e-8 * mx) {
      if (!opt.taper_edges)
        throw ConfigError(
            "split_step_propagate: field does not vanish at the box edges; enlarge the box "
            "or enable the edge taper");
      apply_edge_taper(chi);
      tapered = true;
    }
  }

  // Gauge away the -id psi term: psi = chi exp(-Lambda), Lambda = int_0^t d.
  const bool gauged = !q.d.identically_zero;
  quadrature::CumulativeIntegral Lambda;
  if (gauged) {
    std::vector<double> nodes;
    const int nn = 256;
    for (int i = 0; i <= nn; ++i) nodes.push_back(t_start + (t_end - t_start) * i / nn);
    Lambda = quadrature::CumulativeIntegral([&q](double s) { return q.d(s); }, nodes, 1e-13);
  }
  auto lambda_at = [&](double t) { return gauged ? Lambda(t) : 0.0; };
  const double Lam0 = lambda_at(t_start);
  if (gauged)
    for (auto& z : chi) z *= std::exp(Lam0);

  FieldGrid out;
  out.tapered = tapered;
  out.x.resize(N);
  const double dx = 2.0 * L / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) out.x[i] = -L + dx * static_cast<double>(i);

  const int nstore = std::max(opt.store_slices, 2);
  std::vector<long> store_steps(nstore);
  for (int s = 0; s < nstore; ++s)
    store_steps[s] = std::llround(static_cast<double>(nsteps) * s / (nstore - 1));

  Fft fft(N);
  std::vector<complex<double>> spectral(N);
  auto maybe_store = [&](long step) {
    if (std::find(store_steps.begin(), store_steps.end(), step) == store_steps.end()) return;
    const double t = t_start + dt * static_cast<double>(step);
    out.t.push_back(t);
    const double gauge_back = gauged ? std::exp(-lambda_at(t)) : 1.0;
    for (std::size_t i = 0; i < N; ++i) out.values.push_back(chi[i] * gauge_back);
  };
  auto check_aliasing = [&](long step) {
    spectral = chi;
    fft.forward(spectral.data());
    double total = 0.0, top = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = std::norm(spectral[i]);
      total += e;
      if (std::abs(k[i]) > (2.0 / 3.0) * kmax) top += e;
    }
    if (top > 1e-6 * total)
      throw NumericalError("split_step_propagate: top-third spectral energy exceeds 1e-6 "
                           "of total (aliasing) at step " +
                           std::to_string(step));
  };

  maybe_store(0);
  auto half_potential = [&](double tm, double hdt) {
    const double b = q.b(tm), f = q.f(tm);
    const double h_eff = laws.h_of_t(tm) * (gauged ? std::exp(-2.0 * lambda_at(tm)) : 1.0);
    const bool forced = !laws.forcing_absorbed;
    for (std::size_t i = 0; i < N; ++i) {
      const double x = out.x[i];
      double V = b * x * x - f * x + h_eff * std::norm(chi[i]);
      if (forced) V += laws.g_of_xt(x, tm);
      const double ph = -hdt * V;
      chi[i] *= complex<double>{std::cos(ph), std::sin(ph)};
    }
  };

  for (long step = 0; step < nsteps; ++step) {
    const double t = t_start + dt * static_cast<double>(step);
    half_potential(t + 0.25 * dt, 0.5 * dt);
    fft.forward(chi.data());
    const double am = q.a(t + 0.5 * dt);
    const double gm = q.g.identically_zero ? 0.0 : q.g(t + 0.5 * dt);
    for (std::size_t i = 0; i < N; ++i) {
      const double ph = -dt * (am * k[i] * k[i] - gm * k[i]);
      chi[i] *= complex<double>{std::cos(ph), std::sin(ph)};
    }
    fft.inverse(chi.data());
    half_potential(t + 0.75 * dt, 0.5 * dt);
    if (opt.aliasing_check_every > 0 && (step + 1) % opt.aliasing_check_every == 0)
      check_aliasing(step + 1);
    maybe_store(step + 1);
  }
  check_aliasing(nsteps);
  return out;
}

}  // namespace sforge::verifier
