#include "anspde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anspde/fft.hpp"
#include "anspde/fixtures.hpp"
#include "anspde/parallel.hpp"
#include "anspde/stats.hpp"

namespace anspde {

EnergyLedger energy_ledger(const Trajectory& traj) {
  if (traj.ledger.empty())
    throw std::invalid_argument("trajectory has no recorded ledger increments");
  EnergyLedger led;
  led.rows = traj.ledger;
  led.times.assign(traj.times.begin(), traj.times.end() - 1);
  CompensatedSum viscous, damping, vdamp, conv, mart, ito, ctrl, obs, res;
  for (const LedgerRow& r : led.rows) {
    viscous.add(r.viscous);
    damping.add(r.damping);
    vdamp.add(r.vertical_damping);
    conv.add(r.convective);
    mart.add(r.martingale);
    ito.add(r.ito_correction);
    ctrl.add(r.control);
    obs.add(r.observed);
    res.add(r.residual);
    led.max_abs_step_residual = std::max(led.max_abs_step_residual, std::abs(r.residual));
  }
  led.totals.viscous = viscous.value();
  led.totals.damping = damping.value();
  led.totals.vertical_damping = vdamp.value();
  led.totals.convective = conv.value();
  led.totals.martingale = mart.value();
  led.totals.ito_correction = ito.value();
  led.totals.control = ctrl.value();
  led.totals.observed = obs.value();
  led.totals.residual = res.value();
  led.final_residual = led.totals.residual;
  return led;
}

namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    acc += 0.5 * (y[i] + y[i + 1]) * (t[i + 1] - t[i]);
  return acc;
}

MomentEstimate estimate(const std::vector<double>& samples) {
  return {mean(samples), jackknife_se(samples)};
}

}  // namespace

MomentReport moment_estimator(const MomentSpec& spec, const NoiseModel& noise,
                              const VectorField& u0) {
  if (spec.samples < 30)
    throw std::invalid_argument("moment estimation needs at least 30 samples");
  MomentReport rep;
  rep.samples = spec.samples;
  rep.cutoffs = spec.cutoffs;

  for (int cutoff : spec.cutoffs) {
    SolverConfig cfg = spec.base;
    cfg.galerkin_cutoff = cutoff;
    cfg.record_ledger = false;
    cfg.state_stride = 0;
    cfg.validate();

    std::vector<double> sup4(std::size_t(spec.samples));
    std::vector<double> int11(std::size_t(spec.samples));
    std::vector<double> intp(std::size_t(spec.samples));
    parallel_for(std::size_t(spec.samples), spec.workers, [&](std::size_t m) {
      const Trajectory traj = run_galerkin(cfg, u0, noise, std::uint64_t(m));
      double sup_h01 = 0.0;
      std::vector<double> h11sq(traj.times.size()), lp(traj.times.size());
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        sup_h01 = std::max(sup_h01, traj.h01(i));
        h11sq[i] = traj.h11(i) * traj.h11(i);
        lp[i] = std::pow(traj.l2a2[i], 2.0 * cfg.drift.alpha + 2.0);
      }
      sup4[m] = sup_h01 * sup_h01 * sup_h01 * sup_h01;
      const double i11 = trapezoid(traj.times, h11sq);
      int11[m] = i11 * i11;
      intp[m] = trapezoid(traj.times, lp);
    });
    rep.sup_h01_pow4.push_back(estimate(sup4));
    rep.int_h11_sq.push_back(estimate(int11));
    rep.int_l2a2.push_back(estimate(intp));
  }
  return rep;
}

namespace {

struct SampleResult {
  double maj_b = -1.0;  // negative: degenerate
  double gn = 0.0;
  double d3b = 0.0;
  double fgh = 0.0;
  double f_diff = -std::numeric_limits<double>::infinity();
  std::array<IneqRow, 5> rows;
};

ScalarSamples component_samples(const PhysicalField& p, int c) {
  ScalarSamples s;
  s.grid = p.grid;
  s.v = p.comp[c];
  return s;
}

SampleResult evaluate_sample(const IneqEnsembleSpec& spec, const GridPtr& grid, int i) {
  SampleResult out;
  const std::uint64_t base = std::uint64_t(i) * 8;
  const VectorField u = random_divfree_field(grid, spec.decay, spec.amplitude,
                                             spec.seed, base + 0);
  const VectorField v = random_divfree_field(grid, spec.decay, spec.amplitude,
                                             spec.seed, base + 1);
  const VectorField w = random_divfree_field(grid, spec.decay, spec.amplitude,
                                             spec.seed, base + 2);

  DriftParams dp;
  dp.nu = spec.nu;
  dp.a = spec.a;
  dp.alpha = spec.alpha;

  const int n = spec.resolution;
  auto make_row = [&](const char* id, double lhs, double rhs, double stat, bool degen) {
    IneqRow r;
    r.lemma_id = id;
    r.sample_id = i;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = stat;
    r.n = n;
    r.seed = spec.seed;
    r.degenerate = degen;
    return r;
  };

  // maj_B quotient.
  {
    const double lhs = std::abs(trilinear(u, v, w));
    const NormBundle nw = norm_bundle(w), nu_ = norm_bundle(u), nv = norm_bundle(v);
    const double den = nw.h11() * std::sqrt(nu_.gradh * nv.gradh) *
                       std::sqrt(nu_.l2 * nv.l2);
    if (den > 0.0 && std::isfinite(den)) {
      out.maj_b = lhs / den;
      out.rows[0] = make_row("maj_B", lhs, fixtures::kMajB * den, out.maj_b, false);
    } else {
      out.rows[0] = make_row("maj_B", lhs, 0.0, 0.0, true);
    }
  }
  // Horizontal Gagliardo-Nirenberg slice quotient.
  {
    out.gn = gn_slice_ratio(u);
    out.rows[1] = make_row("G-N_2D", out.gn, fixtures::kGn, out.gn, false);
  }
  // Vertical-derivative convective pairing.
  {
    const double pairing = std::abs(d3B_pairing(u));
    const NormBundle nb = norm_bundle(u);
    const double weighted = vertical_damping_quadratures(u, spec.alpha).mag_d3;
    const double bound_shape =
        spec.eps0 * nb.gradh_d3 * nb.gradh_d3 + spec.eps1 / (4.0 * spec.eps0) * weighted +
        nb.d3 * nb.d3 / (spec.eps0 * std::pow(spec.eps1, 1.0 / (spec.alpha - 1.0)));
    out.d3b = bound_shape > 0.0 ? pairing / bound_shape : 0.0;
    out.rows[2] =
        make_row("delta_3_B", pairing, fixtures::kD3B * bound_shape, out.d3b, false);
  }
  // Scalar triple-product Young split. h is built half-aligned with f*g so
  // the third Young term is genuinely exercised.
  {
    const CounterRng rng(spec.seed, base + 3);
    const double af = 0.3 + 0.7 * rng.uniform2(0, 0)[0];
    const PhysicalField up = fft::to_physical(u);
    const PhysicalField vp = fft::to_physical(v);
    const PhysicalField wp = fft::to_physical(w);
    ScalarSamples f = component_samples(up, 0);
    for (auto& x : f.v) x *= af;
    ScalarSamples g = component_samples(vp, 1);
    ScalarSamples h = component_samples(wp, 2);
    for (std::size_t j = 0; j < h.v.size(); ++j)
      h.v[j] = 0.5 * f.v[j] * g.v[j] + 0.1 * h.v[j];
    const auto [lhs, rhs0] = young_triple_bound(f, g, h, spec.alpha, spec.eps0, spec.eps1, 0.0);
    double g2 = 0.0;
    for (double x : g.v) g2 += x * x;
    const double third =
        g2 * grid->cell_volume() / (spec.eps0 * std::pow(spec.eps1, 1.0 / (spec.alpha - 1.0)));
    out.fgh = third > 0.0 ? std::max(0.0, lhs - rhs0) / third : 0.0;
    out.rows[3] =
        make_row("fgh", lhs, rhs0 + fixtures::kFghCalpha * third, out.fgh, false);
  }
  // Drift-difference pairing.
  {
    const double kappa = fixtures::kappa_star(spec.alpha);
    const VectorField U = u - v;
    const double lhs = inner_l2(drift(u, dp) - drift(v, dp), U);
    const NormBundle nU = norm_bundle(U);
    const NormBundle nv = norm_bundle(v);
    const double wdn = weighted_difference_norm2(u, v, dp.alpha);
    const double den = nv.h11() * nv.h11() * nU.l2 * nU.l2;
    out.f_diff = den > 0.0
                     ? (lhs + spec.eta * nU.gradh * nU.gradh + dp.a * kappa * wdn) / den
                     : 0.0;
    const double rhs =
        -spec.eta * nU.gradh * nU.gradh + fixtures::kCEta * den - dp.a * kappa * wdn;
    out.rows[4] = make_row("upper_F-F_t", lhs, rhs, out.f_diff, false);
  }
  return out;
}

}  // namespace

IneqSuiteReport inequality_suite(const IneqEnsembleSpec& spec) {
  if (spec.samples <= 0) throw std::invalid_argument("ensemble must be nonempty");
  if (!(spec.eta > 0.0) || !(spec.eta < spec.nu))
    throw std::invalid_argument("eta must lie in (0, nu)");
  IneqSuiteReport rep;
  rep.spec = spec;
  rep.stats.f_diff = -std::numeric_limits<double>::infinity();
  const GridPtr grid = Grid::make_cubic(spec.resolution);

  std::vector<SampleResult> results(std::size_t(spec.samples));
  parallel_for(std::size_t(spec.samples), spec.workers,
               [&](std::size_t i) { results[i] = evaluate_sample(spec, grid, int(i)); });

  const double tol = 1e-9;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const SampleResult& r = results[i];
    if (r.maj_b < 0.0)
      ++rep.stats.degenerate;
    else
      rep.stats.maj_b = std::max(rep.stats.maj_b, r.maj_b);
    rep.stats.gn = std::max(rep.stats.gn, r.gn);
    rep.stats.d3b = std::max(rep.stats.d3b, r.d3b);
    rep.stats.fgh = std::max(rep.stats.fgh, r.fgh);
    rep.stats.f_diff = std::max(rep.stats.f_diff, r.f_diff);
    for (const IneqRow& row : r.rows) {
      rep.rows.push_back(row);
      if (!row.degenerate && row.lhs > row.rhs + tol + tol * std::abs(row.rhs)) {
        rep.passed = false;
        rep.failures.push_back(row.lemma_id + " violated at sample " +
                               std::to_string(row.sample_id));
      }
    }
  }
  return rep;
}

GronwallResult gronwall_bound(const GronwallInput& in) {
  GronwallResult res;
  if (in.times.size() < 2 || in.paths.empty())
    throw std::invalid_argument("need a time grid and at least one path");
  const std::size_t nt = in.times.size();
  for (const GronwallPath& p : in.paths)
    if (p.X.size() != nt || p.Y.size() != nt || p.I.size() != nt || p.phi.size() != nt)
      throw std::invalid_argument("path series must match the time grid");

  const double rtol = 1e-9;
  res.hypotheses_ok = true;

  if (2.0 * in.beta * std::exp(in.C) > 1.0 + rtol) {
    res.hypotheses_ok = false;
    res.violated = "2 beta e^C <= 1";
    return res;
  }

  // Pathwise checks: integral of phi, and the domination inequality with a
  // trapezoid quadrature for int phi X.
  for (std::size_t p = 0; p < in.paths.size(); ++p) {
    const GronwallPath& path = in.paths[p];
    double iphi = 0.0, iphix = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
      if (i > 0) {
        const double dt = in.times[i] - in.times[i - 1];
        iphi += 0.5 * (path.phi[i - 1] + path.phi[i]) * dt;
        iphix += 0.5 * (path.phi[i - 1] * path.X[i - 1] + path.phi[i] * path.X[i]) * dt;
      }
      const double lhs = path.X[i] + in.kappa * path.Y[i];
      const double rhs = path.Z + iphix + path.I[i];
      if (lhs > rhs * (1.0 + rtol) + rtol) {
        res.hypotheses_ok = false;
        res.violated = "X + kappa Y <= Z + int(phi X) + I (path " + std::to_string(p) + ")";
        return res;
      }
    }
    if (iphi > in.C * (1.0 + rtol) + rtol) {
      res.hypotheses_ok = false;
      res.violated = "int phi <= C (path " + std::to_string(p) + ")";
      return res;
    }
  }

  // Expectation-level hypothesis on I.
  std::vector<double> ex(nt, 0.0), ei(nt, 0.0), exky(nt, 0.0);
  for (const GronwallPath& p : in.paths)
    for (std::size_t i = 0; i < nt; ++i) {
      ex[i] += p.X[i];
      ei[i] += p.I[i];
      exky[i] += p.X[i] + in.kappa * p.Y[i];
    }
  const double inv = 1.0 / double(in.paths.size());
  for (std::size_t i = 0; i < nt; ++i) {
    ex[i] *= inv;
    ei[i] *= inv;
    exky[i] *= inv;
  }
  double iex = 0.0;
  double ez = 0.0;
  for (const GronwallPath& p : in.paths) ez += p.Z;
  ez *= inv;
  for (std::size_t i = 0; i < nt; ++i) {
    if (i > 0)
      iex += 0.5 * (ex[i - 1] + ex[i]) * (in.times[i] - in.times[i - 1]);
    const double rhs = in.beta * ex[i] + in.gamma * iex + in.Ctilde;
    if (ei[i] > rhs * (1.0 + rtol) + rtol) {
      res.hypotheses_ok = false;
      res.violated = "E I <= beta E X + gamma int E X + Ctilde";
      return res;
    }
  }

  res.bound.resize(nt);
  res.holds = true;
  res.worst_margin = std::numeric_limits<double>::infinity();
  const double ec = std::exp(in.C);
  for (std::size_t i = 0; i < nt; ++i) {
    res.bound[i] = 2.0 * std::exp(in.C + 2.0 * in.times[i] * in.gamma * ec) * (ez + in.Ctilde);
    const double margin = res.bound[i] - exky[i];
    res.worst_margin = std::min(res.worst_margin, margin);
    if (margin < -rtol * std::abs(res.bound[i])) res.holds = false;
  }
  return res;
}

double default_norm_cap(const std::vector<Trajectory>& ensemble) {
  std::vector<double> caps;
  caps.reserve(ensemble.size());
  for (const Trajectory& traj : ensemble) {
    double sup_l2sq = 0.0;
    std::vector<double> h11sq(traj.times.size()), lp(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      sup_l2sq = std::max(sup_l2sq, traj.l2[i] * traj.l2[i]);
      h11sq[i] = traj.h11(i) * traj.h11(i);
      lp[i] = std::pow(traj.l2a2[i], 2.0 * traj.cfg.drift.alpha + 2.0);
    }
    const double capped = std::max({sup_l2sq, trapezoid(traj.times, h11sq),
                                    trapezoid(traj.times, lp)});
    caps.push_back(capped);
  }
  std::sort(caps.begin(), caps.end());
  const double median = caps[caps.size() / 2];
  return 10.0 * median;
}

double time_increment_stat(const std::vector<Trajectory>& ensemble, int n_dyadic,
                           double norm_cap) {
  if (ensemble.empty()) throw std::invalid_argument("empty ensemble");
  if (n_dyadic < 1) throw std::invalid_argument("need n_dyadic >= 1");

  CompensatedSum total;
  for (const Trajectory& traj : ensemble) {
    const double T = traj.times.back();
    const std::size_t nstates = traj.states.size();
    if (nstates < (std::size_t(1) << n_dyadic) + 1)
      throw std::invalid_argument("stored states do not resolve the dyadic grid");
    const std::size_t segments = nstates - 1;
    if (segments % (std::size_t(1) << n_dyadic) != 0)
      throw std::invalid_argument("state stride incompatible with the dyadic partition");

    // Norm-cap event from the full-resolution norm series.
    double sup_l2sq = 0.0;
    std::vector<double> cum_h11(traj.times.size(), 0.0), cum_lp(traj.times.size(), 0.0);
    std::vector<double> cum_win(traj.times.size(), 0.0);
    const double alpha = traj.cfg.drift.alpha;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      sup_l2sq = std::max(sup_l2sq, traj.l2[i] * traj.l2[i]);
      if (i > 0) {
        const double dt = traj.times[i] - traj.times[i - 1];
        const double h11a = traj.h11(i - 1) * traj.h11(i - 1);
        const double h11b = traj.h11(i) * traj.h11(i);
        cum_h11[i] = cum_h11[i - 1] + 0.5 * (h11a + h11b) * dt;
        const double lpa = std::pow(traj.l2a2[i - 1], 2.0 * alpha + 2.0);
        const double lpb = std::pow(traj.l2a2[i], 2.0 * alpha + 2.0);
        cum_lp[i] = cum_lp[i - 1] + 0.5 * (lpa + lpb) * dt;
        const double wina = traj.gradh[i - 1] * traj.gradh[i - 1] + lpa;
        const double winb = traj.gradh[i] * traj.gradh[i] + lpb;
        cum_win[i] = cum_win[i - 1] + 0.5 * (wina + winb) * dt;
      }
    }
    const bool in_event = sup_l2sq <= norm_cap && cum_h11.back() <= norm_cap &&
                          cum_lp.back() <= norm_cap;
    if (!in_event) continue;  // indicator zero

    // Map a state index to the step-grid index of the same time.
    const std::size_t stride = (traj.times.size() - 1) / segments;
    auto step_of_state = [&](std::size_t s) { return s * stride; };

    const std::size_t block = segments >> n_dyadic;  // states per dyadic cell
    CompensatedSum path_acc;
    const double ds = T / double(segments);
    // Trapezoid in s within each stored segment; the integrand vanishes at
    // the dyadic boundaries, which keeps the quadrature bias at O(ds^2).
    auto integrand = [&](std::size_t s, std::size_t sbar) {
      const NormBundle nd = norm_bundle(traj.states[s] - traj.states[sbar]);
      return nd.l2 * nd.l2 + cum_win[step_of_state(sbar)] - cum_win[step_of_state(s)];
    };
    for (std::size_t s = 0; s < segments; ++s) {
      const std::size_t cell = s / block;
      const std::size_t sbar = (cell + 1) * block;  // right endpoint state
      path_acc.add(0.5 * (integrand(s, sbar) + integrand(s + 1, sbar)) * ds);
    }
    total.add(path_acc.value());
  }
  return total.value() / double(ensemble.size());
}

}  // namespace anspde
