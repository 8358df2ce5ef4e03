#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "anspde/config.hpp"

namespace fs = std::filesystem;

namespace {

const char* kCli = ANSPDE_CLI_PATH;
const char* kGolden = ANSPDE_GOLDEN_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(bool(is));
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  os << text;
}

int run(const std::string& cmdline) {
  const int rc = std::system(cmdline.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "anspde_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string base_config_json(const std::string& extra = "") {
  std::string s = R"({
  "grid": {"resolution": [16, 16, 16], "box": [6.283185307179586, 6.283185307179586, 6.283185307179586]},
  "drift": {"nu": 0.1, "a": 0.5, "alpha": 1.5},
  "noise": {"n_w": 4, "q0": 1.0, "r": 2.0, "family": "example1",
            "sigma0": {"kind": "basis", "amplitude": 0.05, "mode_decay": 0.0}},
  "solver": {"galerkin_cutoff": 6, "noise_cutoff": 4, "dt": 0.015625, "T": 0.125, "epsilon": 1.0, "seed": 7},
  "initial": {"kind": "random", "decay": 4.0, "amplitude": 0.4, "stream": 0})";
  if (!extra.empty()) s += ",\n" + extra;
  s += "\n}";
  return s;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run(std::string(kCli) + " simulate >/dev/null 2>&1") != 0);  // missing --config
  CHECK(run(std::string(kCli) + " simulate --config /nonexistent.json >/dev/null 2>&1") != 0);
  CHECK(run(std::string(kCli) + " >/dev/null 2>&1") != 0);  // missing subcommand
}

TEST_CASE("dry run validates without writing") {
  const fs::path dir = fresh_dir("dry");
  spit(dir / "cfg.json", base_config_json());
  const fs::path out = dir / "out";
  CHECK(run(std::string(kCli) + " simulate --config " + (dir / "cfg.json").string() +
            " --out " + out.string() + " --dry-run >/dev/null 2>&1") == 0);
  CHECK(!fs::exists(out / "norms.csv"));

  // Invalid config fails the dry run.
  spit(dir / "bad.json", R"({"grid": {"resolution": [3, 3, 3], "box": [1, 1, 1]}})");
  CHECK(run(std::string(kCli) + " simulate --config " + (dir / "bad.json").string() +
            " --dry-run >/dev/null 2>&1") != 0);
}

TEST_CASE("golden simulate output") {
  const fs::path dir = fresh_dir("golden");
  const std::string cfg = std::string(kGolden) + "/simulate_small.json";
  REQUIRE(run(std::string(kCli) + " simulate --config " + cfg + " --out " + dir.string() +
              " >/dev/null 2>&1") == 0);
  CHECK(slurp(dir / "norms.csv") ==
        slurp(fs::path(kGolden) / "simulate_small_norms.csv"));
}

TEST_CASE("byte-identical reruns and manifest inventory") {
  const fs::path dir = fresh_dir("determinism");
  spit(dir / "cfg.json",
       base_config_json(R"(  "output": {"norms_csv": "norms.csv", "snapshots_every": 4})"));
  const fs::path a = dir / "a", b = dir / "b";
  REQUIRE(run(std::string(kCli) + " simulate --config " + (dir / "cfg.json").string() +
              " --out " + a.string() + " >/dev/null 2>&1") == 0);
  REQUIRE(run(std::string(kCli) + " simulate --config " + (dir / "cfg.json").string() +
              " --out " + b.string() + " >/dev/null 2>&1") == 0);
  CHECK(slurp(a / "norms.csv") == slurp(b / "norms.csv"));
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "run_manifest.json") continue;  // carries timestamps
    CHECK(slurp(entry.path()) == slurp(b / name));
  }

  // Manifest: hash matches the canonicalized config, every output is listed
  // with its size, and the inventory is identical across the two runs.
  const std::string manifest = slurp(a / "run_manifest.json");
  const anspde::RunConfig rc = anspde::load_config((dir / "cfg.json").string());
  CHECK(manifest.find(rc.config_hash) != std::string::npos);
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "run_manifest.json") continue;
    CHECK(manifest.find('"' + name + '"') != std::string::npos);
  }
  std::string ma = manifest, mb = slurp(b / "run_manifest.json");
  const auto strip_times = [](std::string& s) {
    const auto pos = s.find("\"timestamps\"");
    REQUIRE(pos != std::string::npos);
    const auto end = s.find('}', pos);
    s.erase(pos, end - pos + 1);
  };
  strip_times(ma);
  strip_times(mb);
  CHECK(ma == mb);
}

TEST_CASE("seed flag changes stochastic output") {
  const fs::path dir = fresh_dir("seeds");
  spit(dir / "cfg.json", base_config_json());
  const fs::path a = dir / "a", b = dir / "b";
  REQUIRE(run(std::string(kCli) + " simulate --config " + (dir / "cfg.json").string() +
              " --out " + a.string() + " >/dev/null 2>&1") == 0);
  REQUIRE(run(std::string(kCli) + " simulate --config " + (dir / "cfg.json").string() +
              " --seed 8 --out " + b.string() + " >/dev/null 2>&1") == 0);
  CHECK(slurp(a / "norms.csv") != slurp(b / "norms.csv"));
}

TEST_CASE("ANSPDE_OUT overrides --out") {
  const fs::path dir = fresh_dir("envout");
  spit(dir / "cfg.json", base_config_json());
  const fs::path flagged = dir / "flagged", env = dir / "env";
  REQUIRE(run("ANSPDE_OUT=" + env.string() + " " + kCli + " simulate --config " +
              (dir / "cfg.json").string() + " --out " + flagged.string() +
              " >/dev/null 2>&1") == 0);
  CHECK(fs::exists(env / "norms.csv"));
  CHECK(!fs::exists(flagged / "norms.csv"));
}

TEST_CASE("verify failure paths") {
  const fs::path dir = fresh_dir("verify");
  SUBCASE("empty ensemble rejected") {
    spit(dir / "cfg.json",
         base_config_json(R"(  "verify": {"samples": 0, "resolutions": [16]})"));
    CHECK(run(std::string(kCli) + " verify --config " + (dir / "cfg.json").string() +
              " --out " + (dir / "o1").string() + " >/dev/null 2>&1") == 3);
  }
  SUBCASE("oversized kappa is a named failure") {
    spit(dir / "cfg.json",
         base_config_json(
             R"(  "verify": {"samples": 2, "resolutions": [16], "audit_samples": 2, "kappa": 0.9})"));
    const std::string err = (dir / "stderr.txt").string();
    CHECK(run(std::string(kCli) + " verify --config " + (dir / "cfg.json").string() +
              " --out " + (dir / "o2").string() + " 2>" + err + " >/dev/null") == 1);
    const std::string text = slurp(err);
    CHECK(text.find("F-F_polynomial") != std::string::npos);
  }
  SUBCASE("default small ensemble passes") {
    spit(dir / "cfg.json",
         base_config_json(
             R"(  "verify": {"samples": 4, "resolutions": [16], "audit_samples": 3})"));
    CHECK(run(std::string(kCli) + " verify --config " + (dir / "cfg.json").string() +
              " --out " + (dir / "o3").string() + " --workers 2 >/dev/null 2>&1") == 0);
    CHECK(fs::exists(dir / "o3" / "inequalities.csv"));
  }
}

TEST_CASE("skeleton and ldp round trips") {
  const fs::path dir = fresh_dir("ldp");
  spit(dir / "cfg.json", base_config_json(R"(  "skeleton": {"control": {"breakpoints": [0.0, 0.125], "coefficients": [[1.0, 0.0, 0.0, 0.0]]}},
  "ldp": {"mode": "weak_convergence", "control": {"breakpoints": [0.0, 0.125], "coefficients": [[0.8, 0.0, 0.0, 0.0]]}, "epsilons": [0.1, 0.01], "paths": 6})"));
  CHECK(run(std::string(kCli) + " skeleton --config " + (dir / "cfg.json").string() +
            " --out " + (dir / "sk").string() + " >/dev/null 2>&1") == 0);
  CHECK(fs::exists(dir / "sk" / "skeleton_report.json"));
  CHECK(run(std::string(kCli) + " ldp --config " + (dir / "cfg.json").string() + " --out " +
            (dir / "wc").string() + " --workers 2 >/dev/null 2>&1") == 0);
  const std::string csv = slurp(dir / "wc" / "weak_convergence.csv");
  CHECK(csv.find("epsilon,mean_Y,stderr,M_mc") == 0);

  // Missing control is a configuration error.
  spit(dir / "nocontrol.json", base_config_json());
  CHECK(run(std::string(kCli) + " skeleton --config " + (dir / "nocontrol.json").string() +
            " --out " + (dir / "sk2").string() + " >/dev/null 2>&1") == 3);
}

TEST_CASE("blow-up exit code") {
  const fs::path dir = fresh_dir("blowup");
  spit(dir / "cfg.json", base_config_json(
      R"(  "couple": {"deltas": [0.001]})"));
  // An absurd initial amplitude overflows the damping term immediately.
  std::string cfg = slurp(dir / "cfg.json");
  const auto pos = cfg.find("\"amplitude\": 0.4");
  REQUIRE(pos != std::string::npos);
  cfg.replace(pos, 16, "\"amplitude\": 1e80");
  spit(dir / "cfg.json", cfg);
  CHECK(run(std::string(kCli) + " simulate --config " + (dir / "cfg.json").string() +
            " --out " + (dir / "o").string() + " >/dev/null 2>&1") == 2);
}
