#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sforge/assembler.hpp"
#include "sforge/config.hpp"
#include "sforge/verifier.hpp"

namespace sforge::scenario {

struct CoeffSpec {
  std::string preset = "free-particle";
  double t_max = 2.5;
  double k = 0.0;                                      // plasma-linear
  double a_mean = -1.0, a_mod = 0.5, a_freq = 1.0, d0 = 0.05;  // fiber-optic
  std::string omega_law = "constant";                  // bec-trap: constant | cosine
  double omega = 1.0;                                  // constant law
  double om_base = 1.0, om_amp = 0.2, om_freq = 1.0;   // cosine law
  std::map<std::string, std::string> table_files;      // tabulated: coefficient -> path
};

struct ProfileSpec {
  int m = 0;
  std::string kind = "bright";  // bright | dark | cn | sn | painleve2
  double g0 = 1.0, h0 = -1.0, C0 = 0.0;
  double k_p2 = 0.5;
  double zeta_min = -40.0, zeta_max = 12.0;
};

struct FeshbachSpec {
  double B0 = 0.0, Delta0 = 0.0, a_inf = 0.0;
  double eta0 = 0.0;  // constant gain in reduced time: Lambda(tau) = eta0 tau
};

struct VerifyPlan {
  std::vector<std::string> checks;
  double t0 = 0.05, t1 = 0.5;  // residual window
  double t_long = 1.2;         // riccati / trajectory / balance window end
  double grid_L = 20.0;
  int grid_N = 512;
  int t_samples = 200;
  double dt = 1e-4;
  double prop_t_end = 1.0;
  int prop_N = 1024;
  double auto_t0 = 0.05, auto_t1 = 0.5;  // autonomization window
  double tol_residual = 1e-6;
  double tol_propagation = 1e-4;
  double tol_riccati = 1e-6;
  double tol_first_integral = 1e-8;
  double tol_trajectory = 1e-6;
  double tol_z_drift = 1e-8;
  double tol_autonomous = 1e-4;
  double tol_balance = 1e-10;
  double tol_feshbach = 1e-10;
  double tol_retime = 1e-9;
  double auto_xi_half_range = 6.0;
};

struct Scenario {
  std::string name;
  std::string description;
  CoeffSpec coeff;
  ProfileSpec profile;
  kernels::PhaseState init;
  double phi = 0.0, y = 0.0;
  std::optional<FeshbachSpec> fesh;
  VerifyPlan plan;
};

std::vector<Scenario> scenario_catalog();
const Scenario& find_catalog_scenario(const std::string& name);
// Catalog name, or a path to a scenario file.
Scenario resolve_scenario(const std::string& name_or_path);
Scenario load_scenario_file(const std::string& path);
Scenario scenario_from_config(const config::KeyValues& kv);
config::KeyValues serialize_scenario(const Scenario& s);

std::shared_ptr<const characteristic::QuadraticCoefficients> build_coefficients(
    const Scenario& s);
profile::SolitonProfile build_profile(const ProfileSpec& p);
assembler::SolitonSolution build_solution(const Scenario& s);

struct CheckRow {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunReport {
  std::vector<CheckRow> rows;
  bool all_pass() const;
};

struct RunOverrides {
  std::optional<double> grid_L;
  std::optional<int> grid_N;
  std::optional<double> t_max;  // overrides plan.prop_t_end / plan.t1 windows
  std::optional<double> dt;
  std::optional<double> tol;  // overrides every tolerance
};

VerifyPlan effective_plan(const Scenario& s, const RunOverrides& o);
RunReport run_scenario(const Scenario& s, const RunOverrides& o = {});

// Output writers shared by the command-line front end.
void write_phase_csv(const std::string& path, const assembler::SolitonSolution& sol, double t0,
                     double t1, int samples);
void write_verify_csv(const std::string& path, const RunReport& report);
struct FeshbachOutputs {
  std::vector<double> pole_times;
  double max_sync_rel = 0.0;
};
FeshbachOutputs write_feshbach_csv(const std::string& bfield_path, const std::string& sync_path,
                                   const Scenario& s, const assembler::SolitonSolution& sol,
                                   double t0, double t1, int samples);

}  // namespace sforge::scenario
