#include "anspde/config.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "anspde/snapshot.hpp"

namespace anspde {

VectorField InitialSpec::build(const GridPtr& grid, std::uint64_t seed) const {
  switch (kind) {
    case Kind::zero:
      return VectorField::zero(grid);
    case Kind::random:
      return random_divfree_field(grid, decay, amplitude, seed, stream);
    case Kind::snapshot: {
      VectorField f = read_snapshot(path);
      if (!f.grid->same_layout(*grid))
        throw std::invalid_argument("initial snapshot grid does not match the config grid");
      return f;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

MultiplierSpec parse_multiplier(const json& j) {
  MultiplierSpec s;
  const std::string kind = j.value("kind", "zero");
  if (kind == "zero")
    s.kind = MultiplierSpec::Kind::zero;
  else if (kind == "constant")
    s.kind = MultiplierSpec::Kind::constant;
  else if (kind == "single_mode")
    s.kind = MultiplierSpec::Kind::single_mode;
  else if (kind == "file")
    s.kind = MultiplierSpec::Kind::file;
  else
    throw std::invalid_argument("unknown multiplier kind: " + kind);
  s.value = j.value("value", 0.0);
  s.mode_decay = j.value("mode_decay", 1.0);
  if (j.contains("m")) {
    const auto m = j.at("m");
    for (int d = 0; d < 3; ++d) s.m[std::size_t(d)] = m.at(std::size_t(d)).get<int>();
  }
  s.phase = j.value("phase", 0.0);
  s.path = j.value("path", std::string());
  return s;
}

Control parse_control(const json& j) {
  Control c;
  c.breakpoints = j.at("breakpoints").get<std::vector<double>>();
  c.coefficients = j.at("coefficients").get<std::vector<std::vector<double>>>();
  c.validate();
  return c;
}

json control_json(const Control& c) {
  json j;
  j["breakpoints"] = c.breakpoints;
  j["coefficients"] = c.coefficients;
  return j;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  const json j = json::parse(text);
  RunConfig rc;

  {
    const json& g = j.at("grid");
    std::array<int, 3> n;
    std::array<double, 3> box;
    for (int d = 0; d < 3; ++d) {
      n[std::size_t(d)] = g.at("resolution").at(std::size_t(d)).get<int>();
      box[std::size_t(d)] = g.at("box").at(std::size_t(d)).get<double>();
    }
    rc.solver.grid = Grid::make(n, box, g.value("dealias", 2.0 / 3.0));
  }
  {
    const json& d = j.at("drift");
    rc.solver.drift.nu = d.at("nu").get<double>();
    rc.solver.drift.a = d.at("a").get<double>();
    rc.solver.drift.alpha = d.at("alpha").get<double>();
    rc.solver.drift.viscous = d.value("viscous", true);
    rc.solver.drift.convective = d.value("convective", true);
    rc.solver.drift.damping = d.value("damping", true);
    rc.solver.drift.validate();
  }
  {
    const json& s = j.at("solver");
    rc.solver.galerkin_cutoff = s.at("galerkin_cutoff").get<int>();
    rc.solver.noise_cutoff = s.value("noise_cutoff", -1);
    rc.solver.dt = s.at("dt").get<double>();
    rc.solver.T = s.at("T").get<double>();
    rc.solver.epsilon = s.value("epsilon", 0.0);
    rc.solver.seed = s.value("seed", std::uint64_t(1));
    const std::string scheme = s.value("scheme", "em_integrating_factor");
    if (scheme == "em_integrating_factor")
      rc.solver.scheme = Scheme::em_integrating_factor;
    else if (scheme == "em_plain")
      rc.solver.scheme = Scheme::em_plain;
    else
      throw std::invalid_argument("unknown scheme: " + scheme);
    rc.solver.state_stride = s.value("state_stride", 0);
    rc.solver.record_ledger = s.value("record_ledger", false);
    rc.solver.store_noise_increments = s.value("store_noise_increments", false);
  }
  {
    const json& nj = j.at("noise");
    const int n_w = nj.at("n_w").get<int>();
    const double q0 = nj.value("q0", 1.0);
    const double r = nj.value("r", 2.0);
    rc.noise.basis = NoiseBasis::make_fourier(rc.solver.grid, n_w, q0, r);
    DiffusionCoefficient& c = rc.noise.coef;
    const std::string family = nj.value("family", "example1");
    if (family == "example1")
      c.family = DiffusionCoefficient::Family::example1;
    else if (family == "example2_lipschitz")
      c.family = DiffusionCoefficient::Family::example2_lipschitz;
    else
      throw std::invalid_argument("unknown noise family: " + family);
    if (nj.contains("sigma0")) {
      const json& s0 = nj.at("sigma0");
      const std::string kind = s0.value("kind", "zero");
      if (kind == "basis")
        c.sigma0.kind = AdditiveSpec::Kind::basis;
      else if (kind == "zero")
        c.sigma0.kind = AdditiveSpec::Kind::zero;
      else if (kind == "file")
        c.sigma0.kind = AdditiveSpec::Kind::file;
      else
        throw std::invalid_argument("unknown sigma0 kind: " + kind);
      c.sigma0.amplitude = s0.value("amplitude", 0.0);
      c.sigma0.mode_decay = s0.value("mode_decay", 1.0);
      c.sigma0.path = s0.value("path", std::string());
    }
    if (nj.contains("sigma1")) c.sigma1 = parse_multiplier(nj.at("sigma1"));
    if (nj.contains("sigma2")) c.sigma2 = parse_multiplier(nj.at("sigma2"));
    if (nj.contains("sigma2t")) c.sigma2t = parse_multiplier(nj.at("sigma2t"));
    c.gradient_terms_enabled = nj.value("gradient_terms", false);
    if (nj.contains("time_modulation")) {
      c.time_mod.amplitude = nj.at("time_modulation").value("amplitude", 0.0);
      c.time_mod.period = nj.at("time_modulation").value("period", 1.0);
    }
    c.example2_saturation = nj.value("example2_saturation", 1.0);
    c.sigma0.load_shape(rc.solver.grid);
    c.sigma1.load_shape(rc.solver.grid);
    c.sigma2.load_shape(rc.solver.grid);
    c.sigma2t.load_shape(rc.solver.grid);
    c.validate();
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    rc.output.norms_csv = o.value("norms_csv", std::string("norms.csv"));
    rc.output.snapshots_every = o.value("snapshots_every", 0);
    rc.output.snapshot_prefix = o.value("snapshot_prefix", std::string("state"));
  }
  if (j.contains("initial")) {
    const json& ij = j.at("initial");
    const std::string kind = ij.value("kind", "zero");
    if (kind == "zero")
      rc.initial.kind = InitialSpec::Kind::zero;
    else if (kind == "random")
      rc.initial.kind = InitialSpec::Kind::random;
    else if (kind == "snapshot")
      rc.initial.kind = InitialSpec::Kind::snapshot;
    else
      throw std::invalid_argument("unknown initial kind: " + kind);
    rc.initial.decay = ij.value("decay", 4.0);
    rc.initial.amplitude = ij.value("amplitude", 0.5);
    rc.initial.stream = ij.value("stream", std::uint64_t(0));
    rc.initial.path = ij.value("path", std::string());
  }
  if (j.contains("moments")) {
    const json& m = j.at("moments");
    if (m.contains("cutoffs")) rc.moments.cutoffs = m.at("cutoffs").get<std::vector<int>>();
    rc.moments.samples = m.value("samples", 48);
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    rc.verify.samples = v.value("samples", 200);
    if (v.contains("resolutions"))
      rc.verify.resolutions = v.at("resolutions").get<std::vector<int>>();
    rc.verify.decay = v.value("decay", 4.0);
    rc.verify.amplitude = v.value("amplitude", 1.0);
    rc.verify.eps0 = v.value("eps0", 1.0);
    rc.verify.eps1 = v.value("eps1", 1.0);
    rc.verify.eta = v.value("eta", 0.05);
    rc.verify.audit_samples = v.value("audit_samples", 12);
    rc.verify.kappa = v.value("kappa", -1.0);
    if (v.contains("constants")) {
      const json& cj = v.at("constants");
      rc.verify.has_constants = true;
      rc.verify.constants.K0 = cj.value("K0", 0.0);
      rc.verify.constants.K1 = cj.value("K1", 0.0);
      rc.verify.constants.K2 = cj.value("K2", 0.0);
      rc.verify.constants.Kt0 = cj.value("Kt0", 0.0);
      rc.verify.constants.Kt1 = cj.value("Kt1", 0.0);
      rc.verify.constants.Kt2 = cj.value("Kt2", 0.0);
      rc.verify.constants.L1 = cj.value("L1", 0.0);
      rc.verify.constants.L2 = cj.value("L2", 0.0);
      rc.verify.constants.gamma = cj.value("gamma", 1.0);
      rc.verify.constants.holder_C = cj.value("holder_C", 0.0);
    }
  }
  if (j.contains("skeleton")) {
    const json& s = j.at("skeleton");
    if (s.contains("control")) {
      rc.skeleton.control = parse_control(s.at("control"));
      rc.skeleton.has_control = true;
    } else if (s.contains("control_file")) {
      rc.skeleton.control = load_control(s.at("control_file").get<std::string>());
      rc.skeleton.has_control = true;
    }
  }
  if (j.contains("ldp")) {
    const json& l = j.at("ldp");
    rc.ldp.mode = l.value("mode", std::string("weak_convergence"));
    if (l.contains("control")) {
      rc.ldp.control = parse_control(l.at("control"));
      rc.ldp.has_control = true;
    }
    if (l.contains("epsilons")) rc.ldp.epsilons = l.at("epsilons").get<std::vector<double>>();
    rc.ldp.paths = l.value("paths", 200);
    rc.ldp.m_bound = l.value("m_bound", 1.0);
    rc.ldp.samples = l.value("samples", 12);
    rc.ldp.tol_y = l.value("tol_y", 0.1);
    if (l.contains("candidates"))
      for (const json& cj : l.at("candidates")) rc.ldp.candidates.push_back(parse_control(cj));
  }
  if (j.contains("couple") && j.at("couple").contains("deltas"))
    rc.couple.deltas = j.at("couple").at("deltas").get<std::vector<double>>();
  if (j.contains("energy_audit") && j.at("energy_audit").contains("dts"))
    rc.energy.dts = j.at("energy_audit").at("dts").get<std::vector<double>>();

  rc.raw_canonical = j.dump();
  rc.config_hash = fnv1a64_hex(rc.raw_canonical);
  return rc;
}

RunConfig load_config(const std::string& path) { return parse_config_text(read_file(path)); }

std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

std::string fnv1a64_file(const std::string& path) { return fnv1a64_hex(read_file(path)); }

CsvWriter::CsvWriter(const std::string& path) : os_(path, std::ios::binary | std::ios::trunc) {
  if (!os_) throw std::runtime_error("cannot open CSV for writing: " + path);
}

std::string CsvWriter::format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

void CsvWriter::header(const std::vector<std::string>& names) { raw_row(names); }

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format(v));
  raw_row(cells);
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
}

std::string artifact_version() {
#ifdef ANSPDE_VERSION_STRING
  return ANSPDE_VERSION_STRING;
#else
  return "0.0.0";
#endif
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string(buf);
}

void write_manifest(const std::string& path, const std::string& config_hash,
                    std::uint64_t seed, const std::string& started,
                    const std::string& finished, const std::vector<std::string>& outputs,
                    const std::string& out_dir) {
  json j;
  j["artifact_version"] = artifact_version();
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["timestamps"] = {{"started", started}, {"finished", finished}};
  json inv = json::array();
  for (const std::string& rel : outputs) {
    const std::string full = out_dir.empty() ? rel : out_dir + "/" + rel;
    const std::string data = read_file(full);
    inv.push_back({{"path", rel}, {"bytes", data.size()}, {"fnv1a64", fnv1a64_hex(data)}});
  }
  j["outputs"] = inv;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write manifest: " + path);
  os << j.dump(2) << '\n';
}

Control control_from_json_text(const std::string& text) {
  return parse_control(json::parse(text));
}

std::string control_to_json_text(const Control& c) { return control_json(c).dump(2); }

Control load_control(const std::string& path) {
  return control_from_json_text(read_file(path));
}

void save_control(const std::string& path, const Control& c) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write control file: " + path);
  os << control_to_json_text(c) << '\n';
}

}  // namespace anspde
