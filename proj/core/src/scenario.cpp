#include "sforge/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "sforge/errors.hpp"
#include "sforge/feshbach.hpp"
#include "sforge/io.hpp"
#include "sforge/quadrature.hpp"

namespace sforge::scenario {

using characteristic::QuadraticCoefficients;
using kernels::PhaseState;

bool RunReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::shared_ptr<const QuadraticCoefficients> build_coefficients(const Scenario& s) {
  const CoeffSpec& c = s.coeff;
  QuadraticCoefficients q;
  if (c.preset == "free-particle") {
    q = characteristic::free_particle(c.t_max);
  } else if (c.preset == "harmonic-trap") {
    q = characteristic::harmonic_trap(c.t_max);
  } else if (c.preset == "fiber-optic") {
    q = characteristic::fiber_optic(c.t_max, c.a_mean, c.a_mod, c.a_freq, c.d0);
  } else if (c.preset == "bec-trap") {
    if (c.omega_law == "constant") {
      q = characteristic::bec_trap_const(c.t_max, c.omega);
    } else if (c.omega_law == "cosine") {
      const double base = c.om_base, amp = c.om_amp, freq = c.om_freq;
      q = characteristic::bec_trap(
          c.t_max, [base, amp, freq](double tau) { return base + amp * std::cos(freq * tau); });
    } else {
      throw ConfigError("unknown bec-trap omega_law: " + c.omega_law);
    }
  } else if (c.preset == "plasma-linear") {
    q = characteristic::plasma_linear(c.t_max, c.k);
  } else if (c.preset == "tabulated") {
    auto fn = [&](const char* name) -> characteristic::TimeFunction {
      auto it = c.table_files.find(name);
      if (it == c.table_files.end()) return characteristic::TimeFunction::zero();
      auto [tcol, vcol] = io::read_table(it->second);
      return characteristic::tabulated(std::move(tcol), std::move(vcol));
    };
    q = characteristic::custom(fn("a"), fn("b"), fn("c"), fn("d"), fn("f"), fn("g"), c.t_max,
                               "tabulated");
    if (c.table_files.find("a") == c.table_files.end())
      throw ConfigError("tabulated coefficients require at least an 'a' table (a != 0)");
  } else {
    throw ConfigError("unknown coefficient preset: " + c.preset);
  }
  return std::make_shared<QuadraticCoefficients>(std::move(q));
}

profile::SolitonProfile build_profile(const ProfileSpec& p) {
  if (p.m == 1 || p.kind == "painleve2") {
    if (p.m != 1 || p.kind != "painleve2")
      throw ConfigError("profile: painleve2 requires m = 1 and vice versa");
    return profile::build_profile_painleve2(p.g0, p.h0, p.k_p2, p.zeta_min, p.zeta_max);
  }
  auto prof = profile::build_profile_m0(p.g0, p.h0, p.C0);
  const std::string got = profile::to_string(prof.kind);
  if (!p.kind.empty() && p.kind != got)
    throw ConfigError("profile: parameters dispatch to '" + got + "', scenario says '" +
                      p.kind + "'");
  return prof;
}

assembler::SolitonSolution build_solution(const Scenario& s) {
  PhaseState init = s.init;
  init.t = 0.0;
  init.xi = 0.0;
  return assembler::assemble(build_coefficients(s), build_profile(s.profile), init, s.phi, s.y);
}

namespace {

Scenario base_scenario(std::string name, std::string description) {
  Scenario s;
  s.name = std::move(name);
  s.description = std::move(description);
  return s;
}

CoeffSpec coeff_preset(std::string preset, double t_max) {
  CoeffSpec c;
  c.preset = std::move(preset);
  c.t_max = t_max;
  return c;
}

ProfileSpec profile_m0(std::string kind, double g0, double h0, double C0) {
  ProfileSpec p;
  p.m = 0;
  p.kind = std::move(kind);
  p.g0 = g0;
  p.h0 = h0;
  p.C0 = C0;
  return p;
}

ProfileSpec profile_p2(double g0, double h0, double k, double zeta_min, double zeta_max) {
  ProfileSpec p;
  p.m = 1;
  p.kind = "painleve2";
  p.g0 = g0;
  p.h0 = h0;
  p.k_p2 = k;
  p.zeta_min = zeta_min;
  p.zeta_max = zeta_max;
  return p;
}

PhaseState init_state(double mu, double alpha, double beta, double gamma) {
  PhaseState st;
  st.mu = mu;
  st.alpha = alpha;
  st.beta = beta;
  st.gamma = gamma;
  return st;
}

std::vector<Scenario> make_catalog() {
  std::vector<Scenario> out;

  {
    auto s = base_scenario("free-bright",
                           "sech pulse of the constant-coefficient focusing equation; the "
                           "workhorse propagation benchmark");
    s.coeff = coeff_preset("free-particle", 2.5);
    s.profile = profile_m0("bright", 1, -1, 0);
    s.init = init_state(1, 0, 1, 0);
    s.phi = 0.4;
    s.y = 0.3;
    s.plan.checks = {"residual", "propagation", "riccati", "first-integral",
                     "trajectory", "autonomous", "balance"};
    s.plan.grid_L = 22;
    s.plan.tol_autonomous = 1e-5;
    out.push_back(s);
  }
  {
    auto s = base_scenario("free-dark",
                           "tanh density dip on a background, chirped initial phase");
    s.coeff = coeff_preset("free-particle", 2.2);
    s.profile = profile_m0("dark", -1, 1, 0.5);
    s.init = init_state(1, 0.1, 1, 0);
    s.y = 0.2;
    s.plan.checks = {"residual", "riccati", "first-integral", "trajectory", "balance"};
    out.push_back(s);
  }
  {
    auto s = base_scenario("free-cn", "periodic elliptic-cosine wave train, chirped");
    s.coeff = coeff_preset("free-particle", 4.0);
    s.profile = profile_m0("cn", 1, -1, 0.3);
    s.init = init_state(1, 0.05, 1, 0.1);
    s.phi = 0.1;
    s.y = 0.4;
    s.plan.checks = {"residual", "riccati", "first-integral", "trajectory", "balance"};
    out.push_back(s);
  }
  {
    auto s = base_scenario("free-sn", "periodic elliptic-sine wave train");
    s.coeff = coeff_preset("free-particle", 2.5);
    s.profile = profile_m0("sn", -1, 1, 0.3);
    s.init = init_state(1, 0.05, 1, 0);
    s.y = 0.25;
    s.plan.checks = {"residual", "riccati", "first-integral", "balance"};
    out.push_back(s);
  }
  {
    auto s = base_scenario("free-painleve2",
                           "m = 1 linear-forcing family with the bounded nonlinear-Airy "
                           "profile");
    s.coeff = coeff_preset("free-particle", 2.0);
    s.profile = profile_p2(1, 1, 0.5, -40, 16);
    s.init = init_state(1, 0, 1, 0);
    s.y = 0.25;
    s.plan.checks = {"residual", "riccati", "trajectory", "balance"};
    s.plan.grid_L = 8;
    s.plan.tol_residual = 1e-5;
    out.push_back(s);
  }
  {
    auto s = base_scenario("fiber-retimed",
                           "varying dispersion with loss; reduces to the free pulse under "
                           "the standard change of time variable");
    s.coeff = coeff_preset("fiber-optic", 2.5);
    s.coeff.a_mean = -1;
    s.coeff.a_mod = 0.5;
    s.coeff.a_freq = 1;
    s.coeff.d0 = 0.05;
    s.profile = profile_m0("bright", 1, -1, 0);
    s.init = init_state(1, 0, 1, 0);
    s.y = 0.3;
    s.plan.checks = {"residual", "riccati", "first-integral", "trajectory", "balance",
                     "retime"};
    s.plan.grid_L = 22;
    out.push_back(s);
  }
  {
    auto s = base_scenario("harmonic-bright",
                           "breathing sech pulse in a static harmonic trap");
    s.coeff = coeff_preset("harmonic-trap", 1.7);  // caustic at pi/2 inside the domain
    s.profile = profile_m0("bright", 1, -1, 0);
    s.init = init_state(1, 0, 1, 0);
    s.phi = 0.2;
    s.y = 0.4;
    s.plan.checks = {"residual", "propagation", "riccati", "first-integral",
                     "trajectory", "autonomous", "balance"};
    s.plan.t1 = 1.0;
    s.plan.t_long = 1.4;
    s.plan.tol_propagation = 1e-3;
    s.plan.auto_t0 = 0.1;
    s.plan.auto_t1 = 1.0;
    out.push_back(s);
  }
  {
    auto s = base_scenario("harmonic-painleve2",
                           "m = 1 family in the harmonic trap, nonlinear-Airy profile");
    s.coeff = coeff_preset("harmonic-trap", 1.2);
    s.profile = profile_p2(1, 1, 0.5, -40, 16);
    s.init = init_state(1, 0, 1, 0);
    s.y = 0.25;
    s.plan.checks = {"residual", "riccati", "balance"};
    s.plan.t1 = 0.8;
    s.plan.t_long = 1.0;
    s.plan.grid_L = 8;
    s.plan.tol_residual = 1e-5;
    out.push_back(s);
  }
  {
    auto s = base_scenario("plasma-accelerating",
                           "linear-in-x potential: the pulse accelerates like a classical "
                           "particle while keeping its shape");
    s.coeff = coeff_preset("plasma-linear", 2.5);
    s.coeff.k = 0.4;
    s.profile = profile_m0("bright", 1, -1, 0);
    s.init = init_state(1, 0, 1, 0.1);
    s.init.delta = 0.2;
    s.init.epsilon = 0.1;
    s.phi = 0.15;
    s.y = 0.3;
    s.plan.checks = {"residual", "propagation", "riccati", "first-integral",
                     "trajectory", "balance"};
    s.plan.grid_L = 22;
    s.plan.prop_t_end = 0.5;
    s.plan.tol_propagation = 1e-3;
    out.push_back(s);
  }
  {
    auto s = base_scenario("plasma-painleve2",
                           "m = 1 forcing, nonlinear-Airy pulse moving at constant velocity");
    s.coeff = coeff_preset("plasma-linear", 2.0);
    s.coeff.k = 0.0;
    s.profile = profile_p2(1, 1, 0.5, -40, 16);
    s.init = init_state(1, 0, 1, 0.1);
    s.y = 0.25;
    s.plan.checks = {"residual", "riccati", "trajectory", "balance"};
    s.plan.grid_L = 8;
    s.plan.tol_residual = 1e-5;
    out.push_back(s);
  }
  {
    auto s = base_scenario("bec-feshbach-harmonic",
                           "condensate pulse in a constant trap; the resonance field "
                           "program that sustains it");
    s.coeff = coeff_preset("bec-trap", 1.4);
    s.coeff.omega = 1.3;
    s.profile = profile_m0("bright", 1, -1, 0);
    s.init = init_state(1, 0.2, 1, 0);
    s.y = 0.3;
    s.fesh = FeshbachSpec{164, 11, -2, 0};
    s.plan.checks = {"residual", "riccati", "first-integral", "balance", "feshbach"};
    s.plan.t1 = 1.0;
    s.plan.t_long = 1.2;
    out.push_back(s);
  }
  {
    auto s = base_scenario("bec-feshbach-linear",
                           "free condensate (trap switched off); linear-in-time field "
                           "program");
    s.coeff = coeff_preset("bec-trap", 2.0);
    s.coeff.omega = 0.0;
    s.profile = profile_m0("bright", 1, -1, 0);
    s.init = init_state(1, 0.2, 1, 0);
    s.y = 0.3;
    s.fesh = FeshbachSpec{907, 1, 3, 0};
    s.plan.checks = {"residual", "riccati", "first-integral", "balance", "feshbach"};
    s.plan.t1 = 0.8;
    s.plan.t_long = 1.5;
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::vector<Scenario> scenario_catalog() { return make_catalog(); }

const Scenario& find_catalog_scenario(const std::string& name) {
  static const std::vector<Scenario> catalog = make_catalog();
  for (const auto& s : catalog)
    if (s.name == name) return s;
  std::string names;
  for (const auto& s : catalog) names += (names.empty() ? "" : ", ") + s.name;
  throw ConfigError("unknown scenario '" + name + "'; catalog: " + names);
}

Scenario resolve_scenario(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) return load_scenario_file(name_or_path);
  return find_catalog_scenario(name_or_path);
}

Scenario load_scenario_file(const std::string& path) {
  return scenario_from_config(config::KeyValues::parse_file(path));
}

Scenario scenario_from_config(const config::KeyValues& kv) {
  Scenario s;
  s.name = kv.get_string("name");
  s.description = kv.get_string("description", "");

  s.coeff.preset = kv.get_string("coefficients.preset");
  s.coeff.t_max = kv.get_double("coefficients.t_max", 2.5);
  s.coeff.k = kv.get_double("coefficients.k", 0.0);
  s.coeff.a_mean = kv.get_double("coefficients.a_mean", -1.0);
  s.coeff.a_mod = kv.get_double("coefficients.a_mod", 0.5);
  s.coeff.a_freq = kv.get_double("coefficients.a_freq", 1.0);
  s.coeff.d0 = kv.get_double("coefficients.d0", 0.05);
  s.coeff.omega_law = kv.get_string("coefficients.omega_law", "constant");
  s.coeff.omega = kv.get_double("coefficients.omega", 1.0);
  s.coeff.om_base = kv.get_double("coefficients.om_base", 1.0);
  s.coeff.om_amp = kv.get_double("coefficients.om_amp", 0.2);
  s.coeff.om_freq = kv.get_double("coefficients.om_freq", 1.0);
  for (const char* name : {"a", "b", "c", "d", "f", "g"}) {
    const std::string key = std::string("coefficients.") + name + "_file";
    if (kv.has(key)) s.coeff.table_files[name] = kv.get_string(key);
  }

  s.profile.m = kv.get_int("profile.m", 0);
  s.profile.kind = kv.get_string("profile.kind");
  s.profile.g0 = kv.get_double("profile.g0");
  s.profile.h0 = kv.get_double("profile.h0");
  s.profile.C0 = kv.get_double("profile.C0", 0.0);
  s.profile.k_p2 = kv.get_double("profile.k_p2", 0.5);
  s.profile.zeta_min = kv.get_double("profile.zeta_min", -40.0);
  s.profile.zeta_max = kv.get_double("profile.zeta_max", 12.0);

  s.init.mu = kv.get_double("initial.mu", 1.0);
  s.init.alpha = kv.get_double("initial.alpha", 0.0);
  s.init.beta = kv.get_double("initial.beta", 1.0);
  s.init.gamma = kv.get_double("initial.gamma", 0.0);
  s.init.delta = kv.get_double("initial.delta", 0.0);
  s.init.epsilon = kv.get_double("initial.epsilon", 0.0);
  s.init.kappa = kv.get_double("initial.kappa", 0.0);
  s.phi = kv.get_double("initial.phi", 0.0);
  s.y = kv.get_double("initial.y", 0.0);

  if (kv.has("feshbach.B0")) {
    FeshbachSpec f;
    f.B0 = kv.get_double("feshbach.B0");
    f.Delta0 = kv.get_double("feshbach.Delta0");
    f.a_inf = kv.get_double("feshbach.a_inf");
    f.eta0 = kv.get_double("feshbach.eta0", 0.0);
    s.fesh = f;
  }

  VerifyPlan& p = s.plan;
  p.checks = kv.get_list("verify.checks");
  p.t0 = kv.get_double("verify.t0", p.t0);
  p.t1 = kv.get_double("verify.t1", p.t1);
  p.t_long = kv.get_double("verify.t_long", p.t_long);
  p.grid_L = kv.get_double("verify.grid_L", p.grid_L);
  p.grid_N = kv.get_int("verify.grid_N", p.grid_N);
  p.t_samples = kv.get_int("verify.t_samples", p.t_samples);
  p.dt = kv.get_double("verify.dt", p.dt);
  p.prop_t_end = kv.get_double("verify.prop_t_end", p.prop_t_end);
  p.prop_N = kv.get_int("verify.prop_N", p.prop_N);
  p.auto_t0 = kv.get_double("verify.auto_t0", p.auto_t0);
  p.auto_t1 = kv.get_double("verify.auto_t1", p.auto_t1);
  p.auto_xi_half_range = kv.get_double("verify.auto_xi_half_range", p.auto_xi_half_range);
  p.tol_residual = kv.get_double("verify.tol_residual", p.tol_residual);
  p.tol_propagation = kv.get_double("verify.tol_propagation", p.tol_propagation);
  p.tol_riccati = kv.get_double("verify.tol_riccati", p.tol_riccati);
  p.tol_first_integral = kv.get_double("verify.tol_first_integral", p.tol_first_integral);
  p.tol_trajectory = kv.get_double("verify.tol_trajectory", p.tol_trajectory);
  p.tol_z_drift = kv.get_double("verify.tol_z_drift", p.tol_z_drift);
  p.tol_autonomous = kv.get_double("verify.tol_autonomous", p.tol_autonomous);
  p.tol_balance = kv.get_double("verify.tol_balance", p.tol_balance);
  p.tol_feshbach = kv.get_double("verify.tol_feshbach", p.tol_feshbach);
  p.tol_retime = kv.get_double("verify.tol_retime", p.tol_retime);
  return s;
}

config::KeyValues serialize_scenario(const Scenario& s) {
  config::KeyValues kv;
  kv.set("name", s.name);
  if (!s.description.empty()) kv.set("description", s.description);

  kv.set("coefficients.preset", s.coeff.preset);
  kv.set_double("coefficients.t_max", s.coeff.t_max);
  if (s.coeff.preset == "plasma-linear") kv.set_double("coefficients.k", s.coeff.k);
  if (s.coeff.preset == "fiber-optic") {
    kv.set_double("coefficients.a_mean", s.coeff.a_mean);
    kv.set_double("coefficients.a_mod", s.coeff.a_mod);
    kv.set_double("coefficients.a_freq", s.coeff.a_freq);
    kv.set_double("coefficients.d0", s.coeff.d0);
  }
  if (s.coeff.preset == "bec-trap") {
    kv.set("coefficients.omega_law", s.coeff.omega_law);
    if (s.coeff.omega_law == "constant") {
      kv.set_double("coefficients.omega", s.coeff.omega);
    } else {
      kv.set_double("coefficients.om_base", s.coeff.om_base);
      kv.set_double("coefficients.om_amp", s.coeff.om_amp);
      kv.set_double("coefficients.om_freq", s.coeff.om_freq);
    }
  }
  for (const auto& [name, path] : s.coeff.table_files)
    kv.set("coefficients." + name + "_file", path);

  kv.set_int("profile.m", s.profile.m);
  kv.set("profile.kind", s.profile.kind);
  kv.set_double("profile.g0", s.profile.g0);
  kv.set_double("profile.h0", s.profile.h0);
  kv.set_double("profile.C0", s.profile.C0);
  if (s.profile.kind == "painleve2") {
    kv.set_double("profile.k_p2", s.profile.k_p2);
    kv.set_double("profile.zeta_min", s.profile.zeta_min);
    kv.set_double("profile.zeta_max", s.profile.zeta_max);
  }

  kv.set_double("initial.mu", s.init.mu);
  kv.set_double("initial.alpha", s.init.alpha);
  kv.set_double("initial.beta", s.init.beta);
  kv.set_double("initial.gamma", s.init.gamma);
  kv.set_double("initial.delta", s.init.delta);
  kv.set_double("initial.epsilon", s.init.epsilon);
  kv.set_double("initial.kappa", s.init.kappa);
  kv.set_double("initial.phi", s.phi);
  kv.set_double("initial.y", s.y);

  if (s.fesh) {
    kv.set_double("feshbach.B0", s.fesh->B0);
    kv.set_double("feshbach.Delta0", s.fesh->Delta0);
    kv.set_double("feshbach.a_inf", s.fesh->a_inf);
    kv.set_double("feshbach.eta0", s.fesh->eta0);
  }

  std::string checks;
  for (const auto& c : s.plan.checks) checks += (checks.empty() ? "" : ", ") + c;
  kv.set("verify.checks", checks.empty() ? "none" : checks);
  kv.set_double("verify.t0", s.plan.t0);
  kv.set_double("verify.t1", s.plan.t1);
  kv.set_double("verify.t_long", s.plan.t_long);
  kv.set_double("verify.grid_L", s.plan.grid_L);
  kv.set_int("verify.grid_N", s.plan.grid_N);
  kv.set_int("verify.t_samples", s.plan.t_samples);
  kv.set_double("verify.dt", s.plan.dt);
  kv.set_double("verify.prop_t_end", s.plan.prop_t_end);
  kv.set_int("verify.prop_N", s.plan.prop_N);
  kv.set_double("verify.auto_t0", s.plan.auto_t0);
  kv.set_double("verify.auto_t1", s.plan.auto_t1);
  kv.set_double("verify.auto_xi_half_range", s.plan.auto_xi_half_range);
  kv.set_double("verify.tol_residual", s.plan.tol_residual);
  kv.set_double("verify.tol_propagation", s.plan.tol_propagation);
  kv.set_double("verify.tol_riccati", s.plan.tol_riccati);
  kv.set_double("verify.tol_first_integral", s.plan.tol_first_integral);
  kv.set_double("verify.tol_trajectory", s.plan.tol_trajectory);
  kv.set_double("verify.tol_z_drift", s.plan.tol_z_drift);
  kv.set_double("verify.tol_autonomous", s.plan.tol_autonomous);
  kv.set_double("verify.tol_balance", s.plan.tol_balance);
  kv.set_double("verify.tol_feshbach", s.plan.tol_feshbach);
  kv.set_double("verify.tol_retime", s.plan.tol_retime);
  return kv;
}

VerifyPlan effective_plan(const Scenario& s, const RunOverrides& o) {
  VerifyPlan p = s.plan;
  if (o.grid_L) p.grid_L = *o.grid_L;
  if (o.grid_N) {
    p.grid_N = *o.grid_N;
    p.prop_N = *o.grid_N;
  }
  if (o.dt) p.dt = *o.dt;
  if (o.t_max) {
    p.prop_t_end = *o.t_max;
    p.t1 = std::min(p.t1, *o.t_max);
    p.t_long = std::min(p.t_long, std::max(*o.t_max, p.t1));
  }
  if (o.tol) {
    p.tol_residual = p.tol_propagation = p.tol_riccati = p.tol_first_integral =
        p.tol_trajectory = p.tol_autonomous = p.tol_balance = p.tol_feshbach =
            p.tol_retime = p.tol_z_drift = *o.tol;
  }
  return p;
}

namespace {

// Closed free-particle phase flow (a = -1) used by the fiber retime check.
struct FreeFlow {
  double mu, alpha, beta, gamma, xi;
};
FreeFlow free_flow(const PhaseState& init, double g0, double tau) {
  const double D = 1.0 - 4.0 * init.alpha * tau;
  FreeFlow f;
  f.alpha = init.alpha / D;
  f.beta = init.beta / D;
  f.gamma = init.gamma + init.beta * init.beta * tau / D;
  f.mu = init.mu * D;
  f.xi = g0 * (init.gamma - f.gamma);
  return f;
}

double check_retime(const Scenario& sc, const assembler::SolitonSolution& sol,
                    const VerifyPlan& plan) {
  const auto& c = sc.coeff;
  const auto& prof = sol.profile();
  double worst = 0.0;
  for (int j = 0; j <= 40; ++j) {
    const double t = plan.t0 + (plan.t_long - plan.t0) * j / 40.0;
    const double tau = -c.a_mean * (t + c.a_mod * (1.0 - std::cos(c.a_freq * t)) / c.a_freq);
    const double Lam = c.d0 * t;
    const auto s = sol.state_at(t);
    const FreeFlow f = free_flow(sol.init(), prof.g0, tau);
    worst = std::max(worst, std::abs(s.mu - std::exp(2.0 * Lam) * f.mu));
    worst = std::max(worst, std::abs(s.alpha - f.alpha));
    worst = std::max(worst, std::abs(s.beta - f.beta));
    worst = std::max(worst, std::abs(s.gamma - f.gamma));
    for (double x : {-3.0, -0.7, 0.0, 1.3, 4.0}) {
      const double z = f.beta * x + 2.0 * f.gamma * sol.y();
      const double F = profile::profile_eval(prof, z).F;
      const double S = f.alpha * x * x + f.beta * x * sol.y() +
                       f.gamma * sol.y() * sol.y() + f.xi + sol.phi();
      const std::complex<double> psi_free =
          F / std::sqrt(f.mu) * std::complex<double>{std::cos(S), std::sin(S)};
      const std::complex<double> expected = std::exp(-Lam) * psi_free;
      worst = std::max(worst, std::abs(sol.psi(x, s) - expected));
    }
  }
  return worst;
}

struct FeshbachCheck {
  double sync_rel = 0.0;
  double g_integral_err = 0.0;
};

FeshbachCheck check_feshbach(const Scenario& sc, const assembler::SolitonSolution& sol,
                             const VerifyPlan& plan) {
  const FeshbachSpec& fs = *sc.fesh;
  const feshbach::FeshbachParams params{fs.B0, fs.Delta0, fs.a_inf};
  const feshbach::SolitonConstants consts{sol.profile().h0, sol.init().beta, sol.init().mu};
  FeshbachCheck out;
  for (int j = 0; j <= 60; ++j) {
    const double tau = plan.t0 + (plan.t_long - plan.t0) * j / 60.0;
    const double mu = sol.state_at(tau).mu;
    const double Lam = fs.eta0 * tau;
    double B;
    try {
      B = feshbach::tuning_field(mu, Lam, consts, params);
    } catch (const PoleError&) {
      continue;
    }
    const double lhs = feshbach::scattering_length_ratio(B, params);
    const double rhs = consts.h0 * consts.beta0 * consts.beta0 * consts.mu0 * consts.mu0 *
                       std::exp(-Lam) / (4.0 * mu);
    out.sync_rel = std::max(out.sync_rel, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-30));
  }
  // Forcing-law integral identity against the accumulated gamma drop.
  for (double tau : {0.4 * plan.t_long, plan.t_long}) {
    const auto r = quadrature::integrate(
        [&](double u) {
          const auto st = sol.state_at(u);
          return sol.profile().g0 * sol.coeffs().a(u) * st.beta * st.beta;
        },
        0.0, tau, 1e-11);
    const auto st = sol.state_at(tau);
    const double expected = sol.profile().g0 * (sol.init().gamma - st.gamma);
    out.g_integral_err = std::max(out.g_integral_err, std::abs(r.value - expected));
  }
  return out;
}

void rethrow_with_scenario(const std::string& name) {
  try {
    throw;
  } catch (const FocalPointError& e) {
    throw FocalPointError("scenario " + name + ": " + e.what(), e.time);
  } catch (const PoleError& e) {
    throw PoleError("scenario " + name + ": " + e.what(), e.location);
  } catch (const ConfigError& e) {
    throw ConfigError("scenario " + name + ": " + e.what());
  } catch (const UnsupportedRegimeError& e) {
    throw UnsupportedRegimeError("scenario " + name + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError("scenario " + name + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw std::out_of_range("scenario " + name + ": " + e.what());
  }
}

}  // namespace

RunReport run_scenario(const Scenario& s, const RunOverrides& o) {
  try {
    const VerifyPlan plan = effective_plan(s, o);
    const auto sol = build_solution(s);
    const auto laws = assembler::make_balance_laws(sol);
    RunReport rep;
    auto add = [&rep](std::string name, double value, double tol) {
      rep.rows.push_back({std::move(name), value, tol, value <= tol});
    };

    for (const auto& check : plan.checks) {
      if (check == "residual") {
        verifier::GridSpec g{plan.grid_L, plan.grid_N, plan.t0, plan.t1, plan.t_samples};
        const auto r = verifier::pde_residual(verifier::FieldSampler::of(sol), sol.coeffs(),
                                              laws, g, plan.tol_residual);
        add("pde-residual", r.rel_to_scale, plan.tol_residual);
      } else if (check == "propagation") {
        const int N = plan.prop_N;
        std::vector<std::complex<double>> psi0(N);
        const double dx = 2.0 * plan.grid_L / N;
        const auto s0 = sol.state_at(0.0);
        for (int i = 0; i < N; ++i) psi0[i] = sol.psi(-plan.grid_L + dx * i, s0);
        verifier::PropagateOptions popt;
        popt.dt = plan.dt;
        const auto grid = verifier::split_step_propagate(psi0, sol.coeffs(), laws, plan.grid_L,
                                                         0.0, plan.prop_t_end, popt);
        const auto send = sol.state_at(plan.prop_t_end);
        std::vector<std::complex<double>> exact(N);
        for (int i = 0; i < N; ++i) exact[i] = sol.psi(grid.x[i], send);
        add("propagation-l2", verifier::l2_relative_error(grid.slice(grid.t.size() - 1), exact),
            plan.tol_propagation);
      } else if (check == "riccati") {
        const int n = 801;
        std::vector<PhaseState> traj(n);
        for (int i = 0; i < n; ++i)
          traj[i] = sol.state_at(plan.t0 + (plan.t_long - plan.t0) * i / (n - 1.0));
        const auto r = kernels::riccati_residuals(traj, sol.coeffs(), plan.tol_riccati);
        add("riccati-max", r.worst(), plan.tol_riccati);
      } else if (check == "first-integral") {
        double worst = 0.0;
        for (int i = 0; i <= 800; ++i) {
          const double z = -10.0 + 20.0 * i / 800.0;
          worst = std::max(worst,
                           std::abs(profile::first_integral(sol.profile(), z) -
                                    sol.profile().C0));
        }
        add("first-integral-drift", worst, plan.tol_first_integral);
      } else if (check == "trajectory") {
        const auto r = assembler::classical_trajectory(sol, plan.t0, plan.t_long, 801);
        add("trajectory-velocity", r.velocity_residual, plan.tol_trajectory);
        add("trajectory-accel", r.accel_residual, plan.tol_trajectory);
        add("trajectory-z-drift", r.z_drift, plan.tol_z_drift);
      } else if (check == "autonomous") {
        const auto r = assembler::autonomous_residual(sol, plan.auto_t0, plan.auto_t1,
                                                      -plan.auto_xi_half_range,
                                                      plan.auto_xi_half_range);
        add("autonomous-residual", r.rel_to_scale, plan.tol_autonomous);
      } else if (check == "balance") {
        double worst = 0.0;
        for (int i = 0; i <= 80; ++i) {
          const double t = plan.t0 + (plan.t_long - plan.t0) * i / 80.0;
          const auto st = sol.state_at(t);
          const double direct = laws.h_of_t(t);
          const double lam = sol.kernels().lambda(t);
          const double ini2 = sol.init().beta * sol.init().beta * sol.init().mu * sol.init().mu;
          const double dual = sol.profile().h0 * ini2 * sol.coeffs().a(t) * lam * lam / st.mu;
          worst = std::max(worst, std::abs(direct - dual) / std::max(std::abs(direct), 1e-30));
        }
        add("balance-dual-h", worst, plan.tol_balance);
      } else if (check == "feshbach") {
        if (!s.fesh) throw ConfigError("feshbach check requires a [feshbach] section");
        const auto r = check_feshbach(s, sol, plan);
        add("feshbach-sync", r.sync_rel, plan.tol_feshbach);
        add("feshbach-g-integral", r.g_integral_err, 1e-8);
      } else if (check == "retime") {
        add("retime-agreement", check_retime(s, sol, plan), plan.tol_retime);
      } else {
        throw ConfigError("unknown verification check: " + check);
      }
    }
    return rep;
  } catch (...) {
    rethrow_with_scenario(s.name);
    throw;  // unreachable
  }
}

void write_phase_csv(const std::string& path, const assembler::SolitonSolution& sol, double t0,
                     double t1, int samples) {
  io::ColumnWriter w(path, {"t", "mu", "alpha", "beta", "gamma", "delta", "epsilon", "kappa",
                            "xi"});
  for (int i = 0; i < samples; ++i) {
    const double t = t0 + (t1 - t0) * (samples == 1 ? 0.0 : double(i) / (samples - 1));
    const auto st = sol.state_at(t);
    w.row({t, st.mu, st.alpha, st.beta, st.gamma, st.delta, st.epsilon, st.kappa, st.xi});
  }
  w.close();
}

void write_verify_csv(const std::string& path, const RunReport& report) {
  io::ColumnWriter w(path, {"name", "value", "tolerance", "pass"});
  for (const auto& row : report.rows)
    w.row_mixed(row.name, {row.value, row.tolerance, row.pass ? 1.0 : 0.0});
  w.close();
}

FeshbachOutputs write_feshbach_csv(const std::string& bfield_path, const std::string& sync_path,
                                   const Scenario& s, const assembler::SolitonSolution& sol,
                                   double t0, double t1, int samples) {
  if (!s.fesh) throw ConfigError("scenario has no [feshbach] section");
  const FeshbachSpec& fs = *s.fesh;
  const feshbach::FeshbachParams params{fs.B0, fs.Delta0, fs.a_inf};
  const feshbach::SolitonConstants consts{sol.profile().h0, sol.init().beta, sol.init().mu};

  FeshbachOutputs out;
  io::ColumnWriter bw(bfield_path, {"tau", "B", "a_s_ratio", "kappa"});
  io::ColumnWriter sw(sync_path, {"tau", "B", "a_s_ratio", "a_s_required", "rel_err"});
  for (int i = 0; i < samples; ++i) {
    const double tau = t0 + (t1 - t0) * (samples == 1 ? 0.0 : double(i) / (samples - 1));
    const double mu = sol.state_at(tau).mu;
    const double Lam = fs.eta0 * tau;
    double B;
    try {
      B = feshbach::tuning_field(mu, Lam, consts, params);
    } catch (const PoleError&) {
      out.pole_times.push_back(tau);
      continue;
    }
    const double as = feshbach::scattering_length_ratio(B, params);
    const double kappa = 2.0 * std::exp(Lam) * as;
    bw.row({tau, B, as, kappa});
    const double rhs = consts.h0 * consts.beta0 * consts.beta0 * consts.mu0 * consts.mu0 *
                       std::exp(-Lam) / (4.0 * mu);
    const double rel = std::abs(as - rhs) / std::max(std::abs(rhs), 1e-30);
    out.max_sync_rel = std::max(out.max_sync_rel, rel);
    sw.row({tau, B, as, rhs, rel});
  }
  bw.close();
  sw.close();
  return out;
}

}  // namespace sforge::scenario
