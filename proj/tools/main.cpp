#include <CLI11.hpp>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "sforge/config.hpp"
#include "sforge/errors.hpp"
#include "sforge/io.hpp"
#include "sforge/scenario.hpp"
#include "sforge/verifier.hpp"

namespace fs = std::filesystem;
using namespace sforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct CommonArgs {
  std::string scenario;
  std::string out_dir = ".";
  double grid_L = 0.0;  // 0 = scenario default
  int grid_N = 0;
  double t_max = 0.0;
  double dt = 0.0;
  double tol = 0.0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_scenario = true) {
  auto* opt = cmd->add_option("--scenario", args.scenario,
                              "catalog scenario name or path to a scenario file");
  if (need_scenario) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
  cmd->add_option("--grid-L", args.grid_L, "half-width of the periodic box");
  cmd->add_option("--grid-N", args.grid_N, "number of spatial samples (power of two)");
  cmd->add_option("--t-max", args.t_max, "final time for solve/propagate outputs");
  cmd->add_option("--dt", args.dt, "split-step time step");
  cmd->add_option("--tol", args.tol, "override every verification tolerance");
}

scenario::RunOverrides overrides_of(const CommonArgs& a) {
  scenario::RunOverrides o;
  if (a.grid_L > 0) o.grid_L = a.grid_L;
  if (a.grid_N > 0) o.grid_N = a.grid_N;
  if (a.t_max > 0) o.t_max = a.t_max;
  if (a.dt > 0) o.dt = a.dt;
  if (a.tol > 0) o.tol = a.tol;
  return o;
}

std::string out_path(const CommonArgs& a, const std::string& name) {
  fs::create_directories(a.out_dir);
  return (fs::path(a.out_dir) / name).string();
}

void write_manifest(const CommonArgs& a, const scenario::Scenario& sc,
                    const scenario::VerifyPlan& plan, const std::string& command,
                    const std::vector<std::string>& outputs,
                    const std::vector<std::pair<std::string, std::string>>& extra = {}) {
  config::KeyValues kv = scenario::serialize_scenario(sc);
  kv.set("run.command", command);
  kv.set_double("run.grid_L", plan.grid_L);
  kv.set_int("run.grid_N", plan.grid_N);
  kv.set_int("run.prop_N", plan.prop_N);
  kv.set_double("run.dt", plan.dt);
  kv.set_double("run.t_end", plan.prop_t_end);
  std::string list;
  for (const auto& o : outputs) list += (list.empty() ? "" : ", ") + o;
  kv.set("run.outputs", list);
  for (const auto& [k, v] : extra) kv.set(k, v);
  io::write_text_file(out_path(a, "manifest.txt"), kv.serialize());
}

int cmd_solve(const CommonArgs& a) {
  const auto sc = scenario::resolve_scenario(a.scenario);
  const auto plan = scenario::effective_plan(sc, overrides_of(a));
  const auto sol = scenario::build_solution(sc);
  const double t_end = std::min(plan.prop_t_end, 0.98 * sol.validity_end());

  verifier::FieldGrid grid;
  const int nt = 25;
  grid.x.resize(plan.grid_N);
  const double dx = 2.0 * plan.grid_L / plan.grid_N;
  for (int i = 0; i < plan.grid_N; ++i) grid.x[i] = -plan.grid_L + dx * i;
  for (int j = 0; j < nt; ++j) {
    const double t = t_end * j / (nt - 1.0);
    grid.t.push_back(t);
    const auto st = sol.state_at(t);
    for (int i = 0; i < plan.grid_N; ++i) grid.values.push_back(sol.psi(grid.x[i], st));
  }
  io::write_field(out_path(a, "field.csv"), grid);
  scenario::write_phase_csv(out_path(a, "phase.csv"), sol, 0.0, t_end, 401);
  write_manifest(a, sc, plan, "solve", {"field.csv", "phase.csv"},
                 {{"run.solve_t_end", config::format_double(t_end)},
                  {"run.solve_slices", std::to_string(nt)},
                  {"run.validity_end", config::format_double(sol.validity_end())}});
  return kExitOk;
}

int cmd_verify(const CommonArgs& a) {
  const auto sc = scenario::resolve_scenario(a.scenario);
  const auto plan = scenario::effective_plan(sc, overrides_of(a));
  const auto report = scenario::run_scenario(sc, overrides_of(a));
  scenario::write_verify_csv(out_path(a, "verify.csv"), report);
  write_manifest(a, sc, plan, "verify", {"verify.csv"});
  for (const auto& row : report.rows)
    std::printf("%-24s %-12.5g (tol %.5g)  %s\n", row.name.c_str(), row.value, row.tolerance,
                row.pass ? "pass" : "FAIL");
  return report.all_pass() ? kExitOk : kExitVerificationFailed;
}

int cmd_propagate(const CommonArgs& a) {
  const auto sc = scenario::resolve_scenario(a.scenario);
  const auto plan = scenario::effective_plan(sc, overrides_of(a));
  const auto sol = scenario::build_solution(sc);
  const auto laws = assembler::make_balance_laws(sol);

  const int N = plan.prop_N;
  std::vector<std::complex<double>> psi0(N);
  const double dx = 2.0 * plan.grid_L / N;
  const auto s0 = sol.state_at(0.0);
  for (int i = 0; i < N; ++i) psi0[i] = sol.psi(-plan.grid_L + dx * i, s0);

  verifier::PropagateOptions popt;
  popt.dt = plan.dt;
  popt.store_slices = 9;
  // Non-decaying profiles are windowed over the outer tenth of the box and
  // compared on the interior.
  const auto kind = sol.profile().kind;
  popt.taper_edges = (kind == profile::ProfileKind::Dark ||
                      kind == profile::ProfileKind::GeneralSn ||
                      kind == profile::ProfileKind::GeneralCn);
  const auto grid = verifier::split_step_propagate(psi0, sol.coeffs(), laws, plan.grid_L, 0.0,
                                                   plan.prop_t_end, popt);
  io::write_field(out_path(a, "field.csv"), grid);

  const double interior = grid.tapered ? 0.8 : 1.0;
  io::ColumnWriter errw(out_path(a, "l2.csv"), {"t", "l2_rel_err"});
  for (std::size_t j = 0; j < grid.t.size(); ++j) {
    const auto st = sol.state_at(grid.t[j]);
    std::vector<std::complex<double>> exact(N);
    for (int i = 0; i < N; ++i) exact[i] = sol.psi(grid.x[i], st);
    errw.row({grid.t[j], verifier::l2_relative_error(grid.slice(j), exact, interior)});
  }
  errw.close();
  write_manifest(a, sc, plan, "propagate", {"field.csv", "l2.csv"},
                 {{"run.tapered", grid.tapered ? "true" : "false"}});
  return kExitOk;
}

int cmd_profile(const CommonArgs& a, double z_min, double z_max, int samples) {
  const auto sc = scenario::resolve_scenario(a.scenario);
  const auto prof = scenario::build_profile(sc.profile);
  if (prof.kind == profile::ProfileKind::PainleveII) {
    const double lo = sc.profile.zeta_min / prof.scale, hi = sc.profile.zeta_max / prof.scale;
    z_min = std::max(z_min, std::min(lo, hi));
    z_max = std::min(z_max, std::max(lo, hi));
  }
  io::ColumnWriter w(out_path(a, "profile.csv"), {"z", "F", "Fprime"});
  for (int i = 0; i < samples; ++i) {
    const double z = z_min + (z_max - z_min) * i / (samples - 1.0);
    const auto v = profile::profile_eval(prof, z);
    w.row({z, v.F, v.Fprime});
  }
  w.close();
  const auto plan = scenario::effective_plan(sc, overrides_of(a));
  write_manifest(a, sc, plan, "profile", {"profile.csv"},
                 {{"run.z_min", config::format_double(z_min)},
                  {"run.z_max", config::format_double(z_max)},
                  {"run.z_samples", std::to_string(samples)}});
  return kExitOk;
}

int cmd_feshbach(const CommonArgs& a) {
  const auto sc = scenario::resolve_scenario(a.scenario);
  const auto plan = scenario::effective_plan(sc, overrides_of(a));
  const auto sol = scenario::build_solution(sc);
  const auto out = scenario::write_feshbach_csv(out_path(a, "bfield.csv"),
                                                out_path(a, "sync.csv"), sc, sol, plan.t0,
                                                plan.t_long, 241);
  std::string poles;
  for (double p : out.pole_times) poles += (poles.empty() ? "" : ", ") + config::format_double(p);
  write_manifest(a, sc, plan, "feshbach", {"bfield.csv", "sync.csv"},
                 {{"run.pole_times", poles.empty() ? "none" : poles},
                  {"run.max_sync_rel", config::format_double(out.max_sync_rel)}});
  std::printf("feshbach-sync max relative residual: %.3g (tol %.3g)%s\n", out.max_sync_rel,
              plan.tol_feshbach, out.pole_times.empty() ? "" : "  [poles omitted, see manifest]");
  return out.max_sync_rel <= plan.tol_feshbach ? kExitOk : kExitVerificationFailed;
}

int cmd_catalog(const std::string& write_dir) {
  const auto catalog = scenario::scenario_catalog();
  for (const auto& s : catalog)
    std::printf("%-24s %s\n", s.name.c_str(), s.description.c_str());
  if (!write_dir.empty()) {
    fs::create_directories(write_dir);
    for (const auto& s : catalog) {
      const auto kv = scenario::serialize_scenario(s);
      io::write_text_file((fs::path(write_dir) / (s.name + ".scn")).string(), kv.serialize());
    }
    std::printf("wrote %zu scenario files to %s\n", catalog.size(), write_dir.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soliton-forge: exact solitary-wave solutions of nonautonomous nonlinear "
               "Schrodinger equations with quadratic Hamiltonians, with built-in numerical "
               "verification"};
  app.require_subcommand(1);

  CommonArgs args;
  double z_min = -10.0, z_max = 10.0;
  int z_samples = 1001;
  std::string catalog_write;

  auto* solve = app.add_subcommand("solve", "evaluate a scenario and export field + phase data");
  add_common(solve, args);
  auto* verify = app.add_subcommand("verify", "run a scenario's verification plan");
  add_common(verify, args);
  auto* propagate =
      app.add_subcommand("propagate", "split-step evolution compared against the closed form");
  add_common(propagate, args);
  auto* profile_cmd = app.add_subcommand("profile", "export the travelling-wave profile");
  add_common(profile_cmd, args);
  profile_cmd->add_option("--z-min", z_min, "left end of the profile export");
  profile_cmd->add_option("--z-max", z_max, "right end of the profile export");
  profile_cmd->add_option("--z-samples", z_samples, "number of profile samples");
  auto* fesh = app.add_subcommand("feshbach", "export the resonance field program");
  add_common(fesh, args);
  auto* catalog = app.add_subcommand("catalog", "list built-in scenarios");
  catalog->add_option("--write", catalog_write, "also write the catalog as scenario files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(args);
    if (verify->parsed()) return cmd_verify(args);
    if (propagate->parsed()) return cmd_propagate(args);
    if (profile_cmd->parsed()) return cmd_profile(args, z_min, z_max, z_samples);
    if (fesh->parsed()) return cmd_feshbach(args);
    if (catalog->parsed()) return cmd_catalog(catalog_write);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
