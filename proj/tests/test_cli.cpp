#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sforge/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const fs::path log = fs::temp_directory_path() / "sforge_cli_out.txt";
  const std::string cmd =
      env_prefix + std::string(SFORGE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("catalog lists the built-in scenarios") {
  const auto r = run_cli("catalog");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("free-bright") != std::string::npos);
  CHECK(r.output.find("bec-feshbach-harmonic") != std::string::npos);
}

TEST_CASE("solve writes field, phase and manifest; reruns are byte-identical") {
  const auto d1 = fresh_dir("sforge_cli_solve1");
  const auto d2 = fresh_dir("sforge_cli_solve2");
  const std::string common =
      "solve --scenario free-bright --grid-N 128 --grid-L 16 --t-max 0.4 --out ";
  CHECK(run_cli(common + d1.string()).exit_code == 0);
  // The rerun is capped to one thread; outputs must not depend on the
  // parallelism available.
  CHECK(run_cli(common + d2.string(), "SOLITON_FORGE_THREADS=1 ").exit_code == 0);
  for (const char* f : {"field.csv", "phase.csv", "manifest.txt"}) {
    REQUIRE(fs::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  std::ifstream field(d1 / "field.csv");
  std::string header;
  std::getline(field, header);
  CHECK(header == "t x re im abs2");
  // Every number in the outputs traces back to the manifest.
  const std::string manifest = slurp(d1 / "manifest.txt");
  CHECK(manifest.find("grid_N = 128") != std::string::npos);
  CHECK(manifest.find("preset = free-particle") != std::string::npos);
}

TEST_CASE("solve on a custom grid honors the requested sizes") {
  const auto dir = fresh_dir("sforge_cli_solve3");
  const auto r = run_cli("solve --scenario plasma-accelerating --grid-L 30 --grid-N 1024 "
                         "--t-max 0.3 --out " +
                         dir.string());
  CHECK(r.exit_code == 0);
  std::ifstream field(dir / "field.csv");
  std::string line;
  std::getline(field, line);  // header
  std::getline(field, line);
  std::istringstream row(line);
  double t, x;
  row >> t >> x;
  CHECK(t == 0.0);
  CHECK(x == -30.0);
}

TEST_CASE("unknown scenario exits with the usage code and names the catalog") {
  const auto r = run_cli("solve --scenario not-a-thing --out /tmp");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("catalog") != std::string::npos);
}

TEST_CASE("verify passes on a reduced grid and writes one row per check") {
  const auto dir = fresh_dir("sforge_cli_verify");
  const auto r = run_cli("verify --scenario free-dark --grid-N 128 --out " + dir.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "verify.csv"));
  std::ifstream in(dir / "verify.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "name value tolerance pass");
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  CHECK(rows >= 4);
}

TEST_CASE("verification failure and empty plans set the exit code contract") {
  const auto dir = fresh_dir("sforge_cli_verify2");
  // A tolerance tighter than the discretization floor must fail with code 1.
  auto r = run_cli("verify --scenario free-dark --grid-N 128 --tol 1e-12 --out " +
                   dir.string());
  CHECK(r.exit_code == 1);

  // An empty verification plan passes vacuously.
  const fs::path scn = dir / "noplan.scn";
  sforge::io::write_text_file(scn.string(),
                              "name = noplan\n[coefficients]\npreset = free-particle\n"
                              "[profile]\nkind = bright\ng0 = 1\nh0 = -1\nC0 = 0\n"
                              "[initial]\nbeta = 1\n[verify]\nchecks = none\n");
  r = run_cli("verify --scenario " + scn.string() + " --out " + dir.string());
  CHECK(r.exit_code == 0);
  std::ifstream in(dir / "verify.csv");
  std::string header, rest;
  std::getline(in, header);
  CHECK(!std::getline(in, rest));
}

TEST_CASE("propagate writes the evolved field and its error trace") {
  const auto dir = fresh_dir("sforge_cli_prop");
  const auto r = run_cli(
      "propagate --scenario free-bright --grid-N 256 --dt 5e-4 --t-max 0.3 --out " +
      dir.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "field.csv"));
  REQUIRE(fs::exists(dir / "l2.csv"));
  std::ifstream in(dir / "l2.csv");
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "t l2_rel_err");
  double worst = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    double t, err;
    row >> t >> err;
    worst = std::max(worst, err);
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("profile export covers the requested window") {
  const auto dir = fresh_dir("sforge_cli_profile");
  const auto r = run_cli("profile --scenario free-cn --z-min -5 --z-max 5 --z-samples 11 "
                         "--out " +
                         dir.string());
  CHECK(r.exit_code == 0);
  std::ifstream in(dir / "profile.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "z F Fprime");
  int rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 11);
}

TEST_CASE("feshbach export produces the field program and sync report") {
  const auto dir = fresh_dir("sforge_cli_fesh");
  const auto r = run_cli("feshbach --scenario bec-feshbach-linear --out " + dir.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "bfield.csv"));
  REQUIRE(fs::exists(dir / "sync.csv"));
  std::ifstream in(dir / "bfield.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "tau B a_s_ratio kappa");
}

TEST_CASE("feshbach on a scenario without resonance data is a usage error") {
  const auto r = run_cli("feshbach --scenario free-bright --out /tmp");
  CHECK(r.exit_code == 2);
}
