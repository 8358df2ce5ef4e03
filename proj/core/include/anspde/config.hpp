#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "anspde/analysis.hpp"
#include "anspde/control.hpp"
#include "anspde/noise.hpp"
#include "anspde/solver.hpp"

namespace anspde {

struct OutputOptions {
  std::string norms_csv = "norms.csv";
  int snapshots_every = 0;  // steps between field snapshots; 0 disables
  std::string snapshot_prefix = "state";
};

struct InitialSpec {
  enum class Kind { zero, random, snapshot };
  Kind kind = Kind::zero;
  double decay = 4.0;
  double amplitude = 0.5;
  std::uint64_t stream = 0;
  std::string path;  // snapshot file

  VectorField build(const GridPtr& grid, std::uint64_t seed) const;
};

struct MomentOptions {
  std::vector<int> cutoffs{8, 16, 32};
  int samples = 48;
};

struct VerifyOptions {
  int samples = 200;
  std::vector<int> resolutions{32};
  double decay = 4.0;
  double amplitude = 1.0;
  double eps0 = 1.0;
  double eps1 = 1.0;
  double eta = 0.05;
  int audit_samples = 100;
  double kappa = -1.0;  // < 0: use the frozen monotonicity constant
  // Explicit growth/Lipschitz constants (required to audit the general
  // Lipschitz family, optional otherwise).
  bool has_constants = false;
  ConditionConstants constants;
};

struct SkeletonOptions {
  Control control;
  bool has_control = false;
};

struct LdpOptions {
  std::string mode = "weak_convergence";  // weak_convergence | rate | compactness
  Control control;
  bool has_control = false;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  int paths = 200;
  double m_bound = 1.0;
  int samples = 12;
  double tol_y = 0.1;
  std::vector<Control> candidates;
};

struct CoupleOptions {
  std::vector<double> deltas{1e-3, 1e-4, 1e-5};
};

struct EnergyAuditOptions {
  std::vector<double> dts{1e-2, 5e-3, 2.5e-3};
};

/// Fully parsed run configuration; every subcommand reads its own section.
struct RunConfig {
  SolverConfig solver;
  NoiseModel noise;
  InitialSpec initial;
  OutputOptions output;
  MomentOptions moments;
  VerifyOptions verify;
  SkeletonOptions skeleton;
  LdpOptions ldp;
  CoupleOptions couple;
  EnergyAuditOptions energy;
  std::string config_hash;     // fnv1a64 of the canonical (sorted, compact) JSON
  std::string raw_canonical;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

std::string fnv1a64_hex(std::string_view data);
std::string fnv1a64_file(const std::string& path);

/// Deterministic CSV writer: '.' decimal separator, '\n' line endings,
/// %.17g doubles.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  static std::string format(double v);

 private:
  std::ofstream os_;
};

/// Run manifest: config hash, seed, artifact version, timestamps, and the
/// hashed inventory of every produced file.
void write_manifest(const std::string& path, const std::string& config_hash,
                    std::uint64_t seed, const std::string& started,
                    const std::string& finished, const std::vector<std::string>& outputs,
                    const std::string& out_dir);

std::string artifact_version();
std::string iso_timestamp_now();

Control control_from_json_text(const std::string& text);
std::string control_to_json_text(const Control& c);
Control load_control(const std::string& path);
void save_control(const std::string& path, const Control& c);

}  // namespace anspde
