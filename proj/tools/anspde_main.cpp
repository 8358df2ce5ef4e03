// Command-line driver: simulate | verify | energy-audit | moments |
// skeleton | ldp | couple. Every subcommand takes --config, the shared
// reproducibility flags, and writes its outputs plus a run manifest into the
// output directory.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "anspde/analysis.hpp"
#include "anspde/config.hpp"
#include "anspde/fixtures.hpp"
#include "anspde/ldp.hpp"
#include "anspde/snapshot.hpp"
#include "anspde/stats.hpp"

using namespace anspde;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 2;
  bool dry_run = false;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "Run configuration (JSON)")->required();
  sub->add_option("--out", args.out_dir, "Output directory");
  sub->add_option("--seed", args.seed, "Override the config seed")
      ->each([&](const std::string&) { args.seed_set = true; });
  sub->add_option("--workers", args.workers, "Worker threads for ensembles");
  sub->add_flag("--dry-run", args.dry_run, "Validate the configuration and exit");
}

std::string out_path(const CommonArgs& args, const std::string& rel) {
  return args.out_dir + "/" + rel;
}

struct RunContext {
  RunConfig cfg;
  std::string started;
  std::vector<std::string> outputs;
};

/// Loads + validates; honors --seed and ANSPDE_OUT; creates the out dir.
/// Returns false when --dry-run finished the job.
bool prepare(CommonArgs& args, RunContext& ctx) {
  if (const char* env = std::getenv("ANSPDE_OUT"); env && *env) args.out_dir = env;
  ctx.cfg = load_config(args.config_path);
  if (args.seed_set) ctx.cfg.solver.seed = args.seed;
  ctx.cfg.solver.validate();
  ctx.cfg.noise.coef.validate();
  if (args.dry_run) {
    std::printf("config ok: hash %s, seed %llu\n", ctx.cfg.config_hash.c_str(),
                (unsigned long long)ctx.cfg.solver.seed);
    return false;
  }
  std::filesystem::create_directories(args.out_dir);
  ctx.started = iso_timestamp_now();
  return true;
}

void finish(const CommonArgs& args, const RunContext& ctx) {
  write_manifest(out_path(args, "run_manifest.json"), ctx.cfg.config_hash,
                 ctx.cfg.solver.seed, ctx.started, iso_timestamp_now(), ctx.outputs,
                 args.out_dir);
}

void write_norms_csv(const std::string& path, const Trajectory& traj) {
  CsvWriter csv(path);
  csv.header({"t", "h01", "h11", "gradh", "l2a2"});
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    csv.row({traj.times[i], traj.h01(i), traj.h11(i), traj.gradh[i], traj.l2a2[i]});
}

int cmd_simulate(CommonArgs& args) {
  RunContext ctx;
  if (!prepare(args, ctx)) return 0;
  SolverConfig cfg = ctx.cfg.solver;
  if (ctx.cfg.output.snapshots_every > 0) cfg.state_stride = ctx.cfg.output.snapshots_every;
  const VectorField u0 = ctx.cfg.initial.build(cfg.grid, cfg.seed);
  const Trajectory traj = run_galerkin(cfg, u0, ctx.cfg.noise);

  write_norms_csv(out_path(args, ctx.cfg.output.norms_csv), traj);
  ctx.outputs.push_back(ctx.cfg.output.norms_csv);
  if (ctx.cfg.output.snapshots_every > 0) {
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
      char name[128];
      std::snprintf(name, sizeof name, "%s_%06zu.ansf",
                    ctx.cfg.output.snapshot_prefix.c_str(),
                    s * std::size_t(ctx.cfg.output.snapshots_every));
      write_snapshot(out_path(args, name), traj.states[s]);
      ctx.outputs.push_back(name);
    }
  }
  finish(args, ctx);
  return 0;
}

int cmd_verify(CommonArgs& args) {
  RunContext ctx;
  if (!prepare(args, ctx)) return 0;
  const VerifyOptions& vo = ctx.cfg.verify;
  if (vo.samples <= 0) throw std::invalid_argument("verify needs a nonempty ensemble");

  bool passed = true;
  std::vector<std::string> failures;

  // Monotonicity spot check with the kappa in use.
  const double alpha = ctx.cfg.solver.drift.alpha;
  const double kappa = vo.kappa > 0.0 ? vo.kappa : fixtures::kappa_star(alpha);
  {
    const CounterRng rng(ctx.cfg.solver.seed, 0xF0F0);
    int violations = 0;
    for (int i = 0; i < 100000; ++i) {
      std::array<double, 3> y, z;
      for (int c = 0; c < 3; ++c) {
        const auto gg = rng.gaussian2(std::uint64_t(i), std::uint64_t(c));
        y[std::size_t(c)] = 2.0 * gg[0];
        z[std::size_t(c)] = 2.0 * gg[1];
      }
      const double s = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) +
                       std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
      if (monotonicity_gap(y, z, alpha, kappa) < -1e-12 * std::pow(s, 2.0 * alpha + 2.0))
        ++violations;
    }
    if (violations > 0) {
      passed = false;
      failures.push_back("F-F_polynomial: " + std::to_string(violations) +
                         " monotonicity violations with kappa = " + std::to_string(kappa));
    }
  }

  // Inequality ensemble(s).
  CsvWriter csv(out_path(args, "inequalities.csv"));
  ctx.outputs.push_back("inequalities.csv");
  csv.header({"lemma_id", "sample_id", "lhs", "rhs", "ratio", "N", "seed"});
  IneqStats last_stats;
  int degenerate = 0;
  for (int n : vo.resolutions) {
    IneqEnsembleSpec spec;
    spec.seed = ctx.cfg.solver.seed;
    spec.samples = vo.samples;
    spec.resolution = n;
    spec.decay = vo.decay;
    spec.amplitude = vo.amplitude;
    spec.alpha = alpha;
    spec.eps0 = vo.eps0;
    spec.eps1 = vo.eps1;
    spec.eta = vo.eta;
    spec.nu = ctx.cfg.solver.drift.nu;
    spec.a = ctx.cfg.solver.drift.a;
    spec.workers = args.workers;
    const IneqSuiteReport rep = inequality_suite(spec);
    for (const IneqRow& r : rep.rows)
      csv.raw_row({r.lemma_id, std::to_string(r.sample_id), CsvWriter::format(r.lhs),
                   CsvWriter::format(r.rhs), CsvWriter::format(r.ratio),
                   std::to_string(r.n), std::to_string(r.seed)});
    if (!rep.passed) {
      passed = false;
      failures.insert(failures.end(), rep.failures.begin(), rep.failures.end());
    }
    last_stats = rep.stats;
    degenerate += rep.stats.degenerate;
  }

  // Noise-condition audit on a small field ensemble. The affine family
  // carries closed-form constants; the general Lipschitz family needs them
  // in the config (the audit is its contract).
  AuditReport audit;
  bool audit_ran = false;
  if (vo.audit_samples > 0) {
    const bool affine =
        ctx.cfg.noise.coef.family == DiffusionCoefficient::Family::example1;
    if (affine || vo.has_constants) {
      std::vector<double> times;
      std::vector<VectorField> us, vs;
      for (int i = 0; i < vo.audit_samples; ++i) {
        times.push_back(ctx.cfg.solver.T * double(i) / vo.audit_samples);
        us.push_back(random_divfree_field(ctx.cfg.solver.grid, vo.decay, vo.amplitude,
                                          ctx.cfg.solver.seed, std::uint64_t(9000 + 2 * i)));
        vs.push_back(random_divfree_field(ctx.cfg.solver.grid, vo.decay, vo.amplitude,
                                          ctx.cfg.solver.seed, std::uint64_t(9001 + 2 * i)));
      }
      const ConditionConstants cc =
          vo.has_constants ? vo.constants : constants_from_example1(ctx.cfg.noise);
      audit = audit_condition(ctx.cfg.noise, cc, times, us, vs, ctx.cfg.solver.drift.nu);
      audit_ran = true;
      if (!audit.passed) {
        passed = false;
        for (const auto& v : audit.violations)
          failures.push_back("noise audit: " + v.inequality + " at sample " +
                             std::to_string(v.sample));
      }
    } else {
      std::fprintf(stderr,
                   "note: noise audit skipped (general Lipschitz family needs "
                   "explicit constants in verify.constants)\n");
    }
  }

  {
    std::ofstream rep(out_path(args, "verify_report.json"), std::ios::binary);
    rep << "{\n  \"passed\": " << (passed ? "true" : "false") << ",\n";
    rep << "  \"degenerate_samples\": " << degenerate << ",\n";
    rep << "  \"stats\": {\"maj_B\": " << CsvWriter::format(last_stats.maj_b)
        << ", \"gn\": " << CsvWriter::format(last_stats.gn)
        << ", \"d3b\": " << CsvWriter::format(last_stats.d3b)
        << ", \"fgh\": " << CsvWriter::format(last_stats.fgh)
        << ", \"f_diff\": " << CsvWriter::format(last_stats.f_diff) << "},\n";
    rep << "  \"audit\": " << (audit_ran ? (audit.passed ? "\"passed\"" : "\"failed\"")
                                         : "\"skipped\"")
        << ",\n";
    rep << "  \"failures\": [";
    for (std::size_t i = 0; i < failures.size(); ++i)
      rep << (i ? ", " : "") << '"' << failures[i] << '"';
    rep << "]\n}\n";
    ctx.outputs.push_back("verify_report.json");
  }
  finish(args, ctx);
  for (const auto& f : failures) std::fprintf(stderr, "FAIL %s\n", f.c_str());
  return passed ? 0 : 1;
}

int cmd_energy_audit(CommonArgs& args) {
  RunContext ctx;
  if (!prepare(args, ctx)) return 0;
  const VectorField u0 = ctx.cfg.initial.build(ctx.cfg.solver.grid, ctx.cfg.solver.seed);
  std::vector<double> ldt, lres;
  std::ostringstream residuals;
  for (std::size_t d = 0; d < ctx.cfg.energy.dts.size(); ++d) {
    SolverConfig cfg = ctx.cfg.solver;
    cfg.dt = ctx.cfg.energy.dts[d];
    cfg.record_ledger = true;
    const Trajectory traj = run_galerkin(cfg, u0, ctx.cfg.noise);
    const EnergyLedger led = energy_ledger(traj);
    char name[64];
    std::snprintf(name, sizeof name, "ledger_dt%zu.csv", d);
    CsvWriter csv(out_path(args, name));
    ctx.outputs.push_back(name);
    csv.header({"t", "viscous", "damping", "vertical_damping", "convective", "martingale",
                "ito_correction", "control", "observed", "residual"});
    for (std::size_t i = 0; i < led.rows.size(); ++i) {
      const LedgerRow& r = led.rows[i];
      csv.row({led.times[i], r.viscous, r.damping, r.vertical_damping, r.convective,
               r.martingale, r.ito_correction, r.control, r.observed, r.residual});
    }
    ldt.push_back(std::log(cfg.dt));
    lres.push_back(std::log(std::max(std::abs(led.final_residual), 1e-300)));
    residuals << (d ? ", " : "") << CsvWriter::format(led.final_residual);
  }
  double order = 0.0;
  if (ldt.size() >= 2) order = linear_fit(ldt, lres).slope;
  {
    std::ofstream rep(out_path(args, "energy_report.json"), std::ios::binary);
    rep << "{\n  \"final_residuals\": [" << residuals.str() << "],\n";
    rep << "  \"fitted_order\": " << CsvWriter::format(order) << ",\n";
    rep << "  \"config_hash\": \"" << ctx.cfg.config_hash << "\"\n}\n";
    ctx.outputs.push_back("energy_report.json");
  }
  finish(args, ctx);
  return 0;
}

int cmd_moments(CommonArgs& args) {
  RunContext ctx;
  if (!prepare(args, ctx)) return 0;
  MomentSpec spec;
  spec.base = ctx.cfg.solver;
  spec.cutoffs = ctx.cfg.moments.cutoffs;
  spec.samples = ctx.cfg.moments.samples;
  spec.workers = args.workers;
  const VectorField u0 = ctx.cfg.initial.build(ctx.cfg.solver.grid, ctx.cfg.solver.seed);
  const MomentReport rep = moment_estimator(spec, ctx.cfg.noise, u0);

  CsvWriter csv(out_path(args, "moments.csv"));
  ctx.outputs.push_back("moments.csv");
  csv.header({"cutoff", "metric", "estimate", "stderr"});
  const char* names[3] = {"sup_h01_pow4", "int_h11_sq", "int_l2a2"};
  for (std::size_t c = 0; c < rep.cutoffs.size(); ++c) {
    const MomentEstimate* vals[3] = {&rep.sup_h01_pow4[c], &rep.int_h11_sq[c],
                                     &rep.int_l2a2[c]};
    for (int m = 0; m < 3; ++m)
      csv.raw_row({std::to_string(rep.cutoffs[c]), names[m],
                   CsvWriter::format(vals[m]->value), CsvWriter::format(vals[m]->se)});
  }
  {
    std::ofstream js(out_path(args, "moments_report.json"), std::ios::binary);
    js << "[\n";
    bool first = true;
    for (std::size_t c = 0; c < rep.cutoffs.size(); ++c) {
      const MomentEstimate* vals[3] = {&rep.sup_h01_pow4[c], &rep.int_h11_sq[c],
                                       &rep.int_l2a2[c]};
      for (int m = 0; m < 3; ++m) {
        js << (first ? "" : ",\n") << "  {\"metric\": \"" << names[m]
           << "\", \"estimate\": " << CsvWriter::format(vals[m]->value)
           << ", \"stderr\": " << CsvWriter::format(vals[m]->se)
           << ", \"n\": " << rep.cutoffs[c] << ", \"M\": " << rep.samples
           << ", \"config_hash\": \"" << ctx.cfg.config_hash << "\"}";
        first = false;
      }
    }
    js << "\n]\n";
    ctx.outputs.push_back("moments_report.json");
  }
  finish(args, ctx);
  return 0;
}

int cmd_skeleton(CommonArgs& args) {
  RunContext ctx;
  if (!prepare(args, ctx)) return 0;
  if (!ctx.cfg.skeleton.has_control)
    throw std::invalid_argument("skeleton subcommand needs a control in the config");
  const VectorField u0 = ctx.cfg.initial.build(ctx.cfg.solver.grid, ctx.cfg.solver.seed);
  const Trajectory traj =
      run_skeleton(ctx.cfg.solver, u0, ctx.cfg.noise, ctx.cfg.skeleton.control);
  write_norms_csv(out_path(args, ctx.cfg.output.norms_csv), traj);
  ctx.outputs.push_back(ctx.cfg.output.norms_csv);
  const YNorm y = y_norm(traj);
  {
    std::ofstream js(out_path(args, "skeleton_report.json"), std::ios::binary);
    js << "{\n  \"control_energy\": "
       << CsvWriter::format(control_energy(ctx.cfg.skeleton.control))
       << ",\n  \"y_sup_l2\": " << CsvWriter::format(y.sup_l2)
       << ",\n  \"y_int_h10\": " << CsvWriter::format(y.int_h10)
       << ",\n  \"config_hash\": \"" << ctx.cfg.config_hash << "\"\n}\n";
    ctx.outputs.push_back("skeleton_report.json");
  }
  finish(args, ctx);
  return 0;
}

int cmd_ldp(CommonArgs& args) {
  RunContext ctx;
  if (!prepare(args, ctx)) return 0;
  const LdpOptions& lo = ctx.cfg.ldp;

  if (lo.mode == "weak_convergence") {
    if (!lo.has_control) throw std::invalid_argument("weak convergence needs a control");
    const WeakConvergenceResult res = weak_convergence_experiment(
        lo.control, lo.epsilons, lo.paths, ctx.cfg.solver, ctx.cfg.noise, args.workers);
    CsvWriter csv(out_path(args, "weak_convergence.csv"));
    ctx.outputs.push_back("weak_convergence.csv");
    csv.header({"epsilon", "mean_Y", "stderr", "M_mc"});
    for (const auto& row : res.rows)
      csv.raw_row({CsvWriter::format(row.epsilon), CsvWriter::format(row.mean_y),
                   CsvWriter::format(row.se), std::to_string(lo.paths)});
    std::ofstream js(out_path(args, "ldp_report.json"), std::ios::binary);
    js << "{\n  \"mode\": \"weak_convergence\",\n  \"slope\": "
       << CsvWriter::format(res.slope) << ",\n  \"config_hash\": \"" << ctx.cfg.config_hash
       << "\"\n}\n";
    ctx.outputs.push_back("ldp_report.json");
  } else if (lo.mode == "rate") {
    if (!lo.has_control || lo.candidates.empty())
      throw std::invalid_argument("rate mode needs a target control and candidates");
    SolverConfig det = ctx.cfg.solver;
    det.state_stride = 1;
    const VectorField u0 = ctx.cfg.initial.build(det.grid, det.seed);
    const Trajectory target = run_skeleton(det, u0, ctx.cfg.noise, lo.control);
    const RateEstimate est =
        rate_upper_bound(target, lo.candidates, det, ctx.cfg.noise, lo.tol_y);
    std::ofstream js(out_path(args, "ldp_report.json"), std::ios::binary);
    const char* status = est.status == RateEstimate::Status::exact_zero ? "exact_zero"
                         : est.status == RateEstimate::Status::upper_bound ? "upper_bound"
                                                                           : "infeasible";
    js << "{\n  \"mode\": \"rate\",\n  \"status\": \"" << status << "\",\n  \"value\": "
       << (std::isfinite(est.value) ? CsvWriter::format(est.value) : "\"inf\"")
       << ",\n  \"match_residual\": " << CsvWriter::format(est.match_residual)
       << ",\n  \"target_energy\": " << CsvWriter::format(control_energy(lo.control))
       << ",\n  \"config_hash\": \"" << ctx.cfg.config_hash << "\"\n}\n";
    ctx.outputs.push_back("ldp_report.json");
  } else if (lo.mode == "compactness") {
    const CompactnessReport rep = compactness_probe(lo.m_bound, lo.samples, ctx.cfg.solver,
                                                    ctx.cfg.noise, ctx.cfg.solver.seed,
                                                    args.workers);
    CsvWriter csv(out_path(args, "compactness.csv"));
    ctx.outputs.push_back("compactness.csv");
    csv.header({"i", "j", "d1", "dy"});
    for (const auto& p : rep.pairs)
      csv.raw_row({std::to_string(p.i), std::to_string(p.j), CsvWriter::format(p.d1),
                   CsvWriter::format(p.dy)});
    std::ofstream js(out_path(args, "ldp_report.json"), std::ios::binary);
    js << "{\n  \"mode\": \"compactness\",\n  \"trend_ok\": "
       << (rep.trend_ok ? "true" : "false")
       << ",\n  \"mean_dy_low_d1\": " << CsvWriter::format(rep.mean_dy_low_d1)
       << ",\n  \"mean_dy_high_d1\": " << CsvWriter::format(rep.mean_dy_high_d1)
       << ",\n  \"config_hash\": \"" << ctx.cfg.config_hash << "\"\n}\n";
    ctx.outputs.push_back("ldp_report.json");
    if (!rep.trend_ok) {
      finish(args, ctx);
      return 1;
    }
  } else {
    throw std::invalid_argument("unknown ldp mode: " + lo.mode);
  }
  finish(args, ctx);
  return 0;
}

int cmd_couple(CommonArgs& args) {
  RunContext ctx;
  if (!prepare(args, ctx)) return 0;
  const VectorField u0 = ctx.cfg.initial.build(ctx.cfg.solver.grid, ctx.cfg.solver.seed);
  const VectorField w = random_divfree_field(ctx.cfg.solver.grid, 4.0, 1.0,
                                             ctx.cfg.solver.seed, 0xC0FFEE);
  CsvWriter csv(out_path(args, "couple.csv"));
  ctx.outputs.push_back("couple.csv");
  csv.header({"delta", "sup_dist", "sup_dist_over_delta", "int_gradh2"});
  for (double delta : ctx.cfg.couple.deltas) {
    VectorField ub = u0;
    if (delta != 0.0) axpy(ub, delta, w);
    const CoupleReport rep = couple_runs(ctx.cfg.solver, u0, ub, ctx.cfg.noise);
    csv.row({delta, rep.sup_dist, delta > 0.0 ? rep.sup_dist / delta : 0.0,
             rep.int_gradh2});
  }
  finish(args, ctx);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator and verification harness for the damped "
               "anisotropic stochastic Navier-Stokes system"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*handler)(CommonArgs&) = nullptr;

  struct SubSpec {
    const char* name;
    const char* desc;
    int (*fn)(CommonArgs&);
  };
  const SubSpec specs[] = {
      {"simulate", "Integrate the stochastic Galerkin system", cmd_simulate},
      {"verify", "Run the inequality and noise-condition verifiers", cmd_verify},
      {"energy-audit", "Per-step energy identity ledger across dt", cmd_energy_audit},
      {"moments", "Monte Carlo moment estimates across Galerkin cutoffs", cmd_moments},
      {"skeleton", "Integrate the deterministic control equation", cmd_skeleton},
      {"ldp", "Small-noise experiments: weak_convergence | rate | compactness", cmd_ldp},
      {"couple", "Same-noise coupled runs with perturbed data", cmd_couple},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.desc);
    add_common(sub, args);
    sub->callback([&args, &handler, fn = s.fn] { handler = fn; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return handler(args);
  } catch (const BlowupError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
