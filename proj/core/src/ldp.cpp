#include "anspde/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anspde/parallel.hpp"
#include "anspde/stats.hpp"

namespace anspde {

YNorm y_norm(const Trajectory& traj) {
  YNorm y;
  std::vector<double> h10sq(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    y.sup_l2 = std::max(y.sup_l2, traj.l2[i]);
    h10sq[i] = traj.h10(i) * traj.h10(i);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i)
    acc += 0.5 * (h10sq[i] + h10sq[i + 1]) * (traj.times[i + 1] - traj.times[i]);
  y.int_h10 = std::sqrt(acc);
  return y;
}

double trajectory_y_distance(const Trajectory& a, const Trajectory& b) {
  if (a.state_times.size() != b.state_times.size() || a.state_times.empty())
    throw std::invalid_argument("trajectories must store states on one grid");
  double sup = 0.0, acc = 0.0;
  std::vector<double> h10sq(a.state_times.size());
  for (std::size_t i = 0; i < a.state_times.size(); ++i) {
    if (std::abs(a.state_times[i] - b.state_times[i]) > 1e-12)
      throw std::invalid_argument("state grids differ");
    const NormBundle nd = norm_bundle(a.states[i] - b.states[i]);
    sup = std::max(sup, nd.l2);
    h10sq[i] = nd.h10() * nd.h10();
  }
  for (std::size_t i = 0; i + 1 < a.state_times.size(); ++i)
    acc += 0.5 * (h10sq[i] + h10sq[i + 1]) * (a.state_times[i + 1] - a.state_times[i]);
  return sup + std::sqrt(acc);
}

namespace {

template <typename Feasible>
RateEstimate rate_bound_impl(const std::vector<Control>& candidates, const SolverConfig& cfg,
                             const NoiseModel& noise, const VectorField& u0,
                             Feasible&& feasible_residual, double tol) {
  RateEstimate est;
  est.value = std::numeric_limits<double>::infinity();
  est.match_residual = std::numeric_limits<double>::infinity();
  for (const Control& c : candidates) {
    const Trajectory sk = run_skeleton(cfg, u0, noise, c);
    const double resid = feasible_residual(sk);
    est.match_residual = std::min(est.match_residual, resid);
    if (resid <= tol) {
      const double e = c.energy();
      if (e < est.value) {
        est.value = e;
        est.achieving = c;
        est.match_residual = resid;
      }
    }
  }
  if (!est.achieving) {
    est.status = RateEstimate::Status::infeasible;
    est.value = std::numeric_limits<double>::infinity();
  } else {
    est.status = est.value == 0.0 ? RateEstimate::Status::exact_zero
                                  : RateEstimate::Status::upper_bound;
  }
  return est;
}

VectorField initial_state(const Trajectory& target) {
  if (target.states.empty())
    throw std::invalid_argument("target trajectory must store states");
  return target.states.front();
}

}  // namespace

RateEstimate rate_upper_bound(const Trajectory& target, const std::vector<Control>& candidates,
                              const SolverConfig& cfg, const NoiseModel& noise, double tol_Y) {
  const VectorField u0 = initial_state(target);
  return rate_bound_impl(
      candidates, cfg, noise, u0,
      [&](const Trajectory& sk) { return trajectory_y_distance(sk, target); }, tol_Y);
}

RateEstimate rate_upper_bound_endpoint(const VectorField& target_end,
                                       const std::vector<Control>& candidates,
                                       const SolverConfig& cfg, const NoiseModel& noise,
                                       double tol_end) {
  VectorField u0 = VectorField::zero(target_end.grid);
  return rate_bound_impl(
      candidates, cfg, noise, u0,
      [&](const Trajectory& sk) {
        return norm_bundle(sk.states.back() - target_end).l2;
      },
      tol_end);
}

Control refine_control(const Trajectory& target, const Control& start,
                       const SolverConfig& cfg, const NoiseModel& noise, double tol_Y,
                       int sweeps) {
  const VectorField u0 = initial_state(target);
  auto objective = [&](const Control& c) {
    const Trajectory sk = run_skeleton(cfg, u0, noise, c);
    const double d = trajectory_y_distance(sk, target);
    const double excess = std::max(0.0, d - tol_Y);
    return c.energy() + 1e4 * excess * excess;
  };

  Control best = start;
  double best_obj = objective(best);
  double step_scale = 0.25;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t j = 0; j < best.coefficients.size(); ++j) {
      for (std::size_t k = 0; k < best.coefficients[j].size(); ++k) {
        const double base = best.coefficients[j][k];
        const double scale = std::max(1.0, std::abs(base));
        for (double delta : {step_scale * scale, -step_scale * scale}) {
          Control trial = best;
          trial.coefficients[j][k] = base + delta;
          const double obj = objective(trial);
          if (obj < best_obj) {
            best = std::move(trial);
            best_obj = obj;
            break;
          }
        }
      }
    }
    step_scale *= 0.5;
  }
  return best;
}

WeakConvergenceResult weak_convergence_experiment(const Control& phi,
                                                  const std::vector<double>& eps_list,
                                                  int m_mc, const SolverConfig& cfg,
                                                  const NoiseModel& noise, int workers) {
  phi.validate();
  if (m_mc < 2) throw std::invalid_argument("need at least two Monte Carlo paths");
  // Gradient-dependent coefficients are out of scope for the small-noise
  // limit; reject them before spending any compute.
  if (noise.coef.gradient_terms_enabled || noise.coef.sigma2.active() ||
      noise.coef.sigma2t.active())
    throw std::invalid_argument("weak-convergence experiment requires gradient-free noise");

  SolverConfig base = cfg;
  base.state_stride = 1;
  base.record_ledger = false;
  base.store_noise_increments = false;
  base.validate();

  const VectorField u0 = VectorField::zero(base.grid);
  SolverConfig det = base;
  det.epsilon = 0.0;
  const Trajectory skeleton = run_skeleton(det, u0, noise, phi);

  WeakConvergenceResult out;
  for (double eps : eps_list) {
    SolverConfig stoch = base;
    stoch.epsilon = eps;
    std::vector<double> dist(static_cast<std::size_t>(m_mc));
    parallel_for(std::size_t(m_mc), workers, [&](std::size_t p) {
      const Trajectory traj = run_controlled(stoch, u0, noise, phi, std::uint64_t(p));
      dist[p] = trajectory_y_distance(traj, skeleton);
    });
    WeakConvergenceRow row;
    row.epsilon = eps;
    row.mean_y = mean(dist);
    row.se = jackknife_se(dist);
    out.rows.push_back(row);
  }

  std::vector<double> lx, ly;
  for (const auto& row : out.rows)
    if (row.mean_y > 0.0) {
      lx.push_back(std::log(row.epsilon));
      ly.push_back(std::log(row.mean_y));
    }
  if (lx.size() >= 2) out.slope = linear_fit(lx, ly).slope;
  return out;
}

namespace {

// Integral over [lo, hi] of the l-th orthonormal time-Fourier element on
// [0, T]: l = 0 is the constant, odd l are cosines, even l > 0 sines.
double time_basis_integral(int l, double lo, double hi, double T) {
  const double two_pi = 6.283185307179586476925286766559;
  if (l == 0) return (hi - lo) / std::sqrt(T);
  const int j = (l + 1) / 2;
  const double w = two_pi * j / T;
  const double amp = std::sqrt(2.0 / T);
  if (l % 2 == 1) return amp / w * (std::sin(w * hi) - std::sin(w * lo));
  return amp / w * (std::cos(w * lo) - std::cos(w * hi));
}

double control_projection(const Control& c, int l, std::size_t k, double T) {
  double acc = 0.0;
  for (std::size_t j = 0; j < c.coefficients.size(); ++j)
    acc += c.coefficients[j][k] *
           time_basis_integral(l, c.breakpoints[j], c.breakpoints[j + 1], T);
  return acc;
}

}  // namespace

double control_d1_distance(const Control& a, const Control& b) {
  if (a.mode_count() != b.mode_count())
    throw std::invalid_argument("d1 proxy needs a shared coefficient space");
  if (std::abs(a.breakpoints.back() - b.breakpoints.back()) > 1e-12)
    throw std::invalid_argument("controls cover different horizons");
  const double T = a.breakpoints.back();
  const std::size_t nm = a.mode_count();
  // Tensor basis (time-Fourier element l) x (coefficient direction k),
  // enumerated along diagonals l + k so the leading weights cover the
  // time-averaged components of every mode.
  double acc = 0.0;
  double w = 0.5;
  for (int diag = 0; w > 1e-12; ++diag) {
    for (int l = 0; l <= diag; ++l) {
      const std::size_t k = std::size_t(diag - l);
      if (k >= nm) continue;
      const double pa = control_projection(a, l, k, T);
      const double pb = control_projection(b, l, k, T);
      acc += w * std::abs(pa - pb);
      w *= 0.5;
      if (w <= 1e-12) break;
    }
  }
  return acc;
}

CompactnessReport compactness_probe(double m_bound, int sample_count,
                                    const SolverConfig& cfg, const NoiseModel& noise,
                                    std::uint64_t seed, int workers) {
  if (sample_count < 2) throw std::invalid_argument("need at least two controls");
  const int nm = cfg.noise_cutoff > 0 ? cfg.noise_cutoff : noise.basis.size();
  const int intervals = 8;

  // Half the controls on the energy-ball boundary, half strictly inside.
  std::vector<Control> controls(static_cast<std::size_t>(sample_count));
  for (int s = 0; s < sample_count; ++s) {
    Control c;
    c.breakpoints.resize(intervals + 1);
    for (int j = 0; j <= intervals; ++j)
      c.breakpoints[std::size_t(j)] = cfg.T * double(j) / intervals;
    c.coefficients.assign(intervals, std::vector<double>(std::size_t(nm)));
    const CounterRng rng(seed, std::uint64_t(s));
    double norm2 = 0.0;
    for (int j = 0; j < intervals; ++j)
      for (int k = 0; k < nm; ++k) {
        const double g = rng.gaussian(std::uint64_t(j), std::uint64_t(k));
        c.coefficients[std::size_t(j)][std::size_t(k)] = g;
        norm2 += g * g * (c.breakpoints[std::size_t(j) + 1] - c.breakpoints[std::size_t(j)]);
      }
    const double target =
        (s % 2 == 0) ? m_bound : m_bound * (0.2 + 0.6 * double(s) / sample_count);
    const double scale = norm2 > 0.0 ? std::sqrt(target / norm2) : 0.0;
    for (auto& iv : c.coefficients)
      for (double& x : iv) x *= scale;
    controls[std::size_t(s)] = std::move(c);
  }

  SolverConfig det = cfg;
  det.state_stride = 1;
  det.epsilon = 0.0;
  const VectorField u0 = VectorField::zero(det.grid);
  std::vector<Trajectory> sols(controls.size());
  parallel_for(controls.size(), workers, [&](std::size_t s) {
    sols[s] = run_skeleton(det, u0, noise, controls[s]);
  });

  CompactnessReport rep;
  for (int i = 0; i < sample_count; ++i)
    for (int j = i + 1; j < sample_count; ++j) {
      CompactnessPair pr;
      pr.i = i;
      pr.j = j;
      pr.d1 = control_d1_distance(controls[std::size_t(i)], controls[std::size_t(j)]);
      pr.dy = trajectory_y_distance(sols[std::size_t(i)], sols[std::size_t(j)]);
      rep.pairs.push_back(pr);
    }
  std::sort(rep.pairs.begin(), rep.pairs.end(),
            [](const CompactnessPair& a, const CompactnessPair& b) { return a.d1 < b.d1; });
  const std::size_t q = std::max<std::size_t>(1, rep.pairs.size() / 4);
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    lo += rep.pairs[i].dy;
    hi += rep.pairs[rep.pairs.size() - 1 - i].dy;
  }
  rep.mean_dy_low_d1 = lo / double(q);
  rep.mean_dy_high_d1 = hi / double(q);
  rep.trend_ok = rep.mean_dy_low_d1 < rep.mean_dy_high_d1;
  return rep;
}

}  // namespace anspde
