#include "anspde/solver.hpp"

#include <cmath>

#include "anspde/fft.hpp"

namespace anspde {

namespace {

void check_finite(const VectorField& u, int step_index) {
  const NormBundle nb = norm_bundle(u);
  if (!std::isfinite(nb.h11()))
    throw BlowupError(step_index, "||u||_{1,1}", nb.h11());
}

void apply_integrating_factor(VectorField& u, double nu, double dt) {
  const Grid& g = *u.grid;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    (void)j3;
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double e = std::exp(-nu * (k1 * k1 + k2 * k2) * dt);
    for (int c = 0; c < 3; ++c) u.comp[c][i] *= e;
  });
}

}  // namespace

VectorField project_to_galerkin(const VectorField& u, const SolverConfig& cfg) {
  VectorField r = apply_shell_mask(apply_dealias_mask(u),
                                   Grid::shell_radius2(cfg.galerkin_cutoff));
  return leray_project(r);
}

VectorField step(const VectorField& state, double t, int step_index,
                 std::uint64_t trajectory_stream, const SolverConfig& cfg,
                 const NoiseModel& noise, const Control* control, LedgerRow* ledger,
                 std::vector<double>* xi_out) {
  const double dt = cfg.dt;
  const DriftParams& dp = cfg.drift;
  const long shell_r2 = Grid::shell_radius2(cfg.galerkin_cutoff);
  const int nc = cfg.noise_cutoff;

  VectorField incr = VectorField::zero(state.grid);  // dt * R(u) + noise + control
  DampingResult damp;

  if (dp.convective) {
    VectorField b = convective(state, state);
    if (ledger) ledger->convective = -2.0 * dt * inner_01(b, state);
    axpy(incr, -dt, b);
  }
  if (dp.damping) {
    damp = damping_with_diagnostics(state, dp.a, dp.alpha);
    if (ledger) {
      ledger->damping = -2.0 * dt * inner_l2(damp.field, state);
      ledger->vertical_damping =
          -2.0 * dt * inner_l2(partial_derivative(damp.field, 3), partial_derivative(state, 3));
    }
    axpy(incr, -dt, damp.field);
  }
  if (control) {
    const VectorField sphi =
        project_to_galerkin(apply_sigma(t, state, control->at(t), noise, nc), cfg);
    if (ledger) ledger->control = 2.0 * dt * inner_01(sphi, state);
    axpy(incr, dt, sphi);
  }
  if (cfg.epsilon > 0.0) {
    const CounterRng rng(cfg.seed, trajectory_stream);
    const std::vector<double> xi =
        sample_increment(noise.basis, dt, rng, std::uint64_t(step_index));
    const VectorField sdw =
        project_to_galerkin(apply_sigma(t, state, xi, noise, nc), cfg);
    const double se = std::sqrt(cfg.epsilon);
    if (ledger) {
      ledger->martingale = 2.0 * se * inner_01(sdw, state);
      ledger->ito_correction =
          cfg.epsilon * dt * hs_norm2(noise, t, state, HsSpace::Ltilde, nc, shell_r2);
    }
    axpy(incr, se, sdw);
    if (xi_out) *xi_out = xi;
  }

  VectorField next = state + incr;
  if (dp.viscous) {
    if (cfg.scheme == Scheme::em_integrating_factor) {
      // The factor is the exact viscous flow, so its ledger entry is the
      // exact dissipation it produces on this step.
      double before = 0.0;
      if (ledger) {
        const NormBundle nb = norm_bundle(next);
        before = nb.h01() * nb.h01();
      }
      apply_integrating_factor(next, dp.nu, dt);
      if (ledger) {
        const NormBundle nb = norm_bundle(next);
        ledger->viscous = nb.h01() * nb.h01() - before;
      }
    } else {
      if (ledger) {
        const NormBundle nb = norm_bundle(state);
        ledger->viscous =
            -2.0 * dp.nu * dt * (nb.gradh * nb.gradh + nb.gradh_d3 * nb.gradh_d3);
      }
      axpy(next, dp.nu * dt, horizontal_laplacian(state));
    }
  }
  next = project_to_galerkin(next, cfg);
  check_finite(next, step_index);

  if (ledger) {
    const NormBundle b0 = norm_bundle(state);
    const NormBundle b1 = norm_bundle(next);
    ledger->observed = b1.h01() * b1.h01() - b0.h01() * b0.h01();
    ledger->residual = ledger->observed -
                       (ledger->viscous + ledger->damping + ledger->vertical_damping +
                        ledger->convective + ledger->martingale + ledger->ito_correction +
                        ledger->control);
  }
  return next;
}

namespace {

Trajectory run_loop(const SolverConfig& cfg, const VectorField& u0, const NoiseModel& noise,
                    const Control* control, std::uint64_t stream) {
  cfg.validate();
  if (control) control->validate();
  Trajectory traj;
  traj.cfg = cfg;
  const int nsteps = cfg.steps();

  VectorField u = project_to_galerkin(u0, cfg);
  const NormBundle nb0 = norm_bundle(u);
  if (!std::isfinite(nb0.h01())) throw BlowupError(0, "||u0||_{0,1}", nb0.h01());

  auto record = [&](const VectorField& state, double t, int step_index) {
    const NormBundle nb = norm_bundle(state);
    traj.times.push_back(t);
    traj.l2.push_back(nb.l2);
    traj.gradh.push_back(nb.gradh);
    traj.d3.push_back(nb.d3);
    traj.gradh_d3.push_back(nb.gradh_d3);
    traj.l2a2.push_back(lp_norm(state, 2.0 * cfg.drift.alpha + 2.0));
    if (cfg.state_stride > 0 && step_index % cfg.state_stride == 0) {
      traj.state_times.push_back(t);
      traj.states.push_back(state);
    }
  };

  record(u, 0.0, 0);
  for (int i = 0; i < nsteps; ++i) {
    const double t = i * cfg.dt;
    LedgerRow row;
    std::vector<double> xi;
    u = step(u, t, i, stream, cfg, noise, control,
             cfg.record_ledger ? &row : nullptr,
             cfg.store_noise_increments ? &xi : nullptr);
    if (cfg.record_ledger) traj.ledger.push_back(row);
    if (cfg.store_noise_increments) traj.noise_increments.push_back(std::move(xi));
    record(u, (i + 1) * cfg.dt, i + 1);
  }
  return traj;
}

}  // namespace

Trajectory run_galerkin(const SolverConfig& cfg, const VectorField& u0,
                        const NoiseModel& noise, std::uint64_t trajectory_stream) {
  return run_loop(cfg, u0, noise, nullptr, trajectory_stream);
}

Trajectory run_skeleton(const SolverConfig& cfg, const VectorField& u0,
                        const NoiseModel& noise, const Control& control) {
  SolverConfig det = cfg;
  det.epsilon = 0.0;
  return run_loop(det, u0, noise, &control, 0);
}

Trajectory run_controlled(const SolverConfig& cfg, const VectorField& u0,
                          const NoiseModel& noise, const Control& control,
                          std::uint64_t trajectory_stream) {
  return run_loop(cfg, u0, noise, &control, trajectory_stream);
}

double weak_form_residual(const Trajectory& traj, const VectorField& v, double t,
                          const NoiseModel& noise) {
  const SolverConfig& cfg = traj.cfg;
  if (cfg.state_stride != 1 || traj.states.size() != traj.times.size())
    throw std::invalid_argument("weak-form residual needs dense state storage");
  if (t < 0.0 || t > traj.times.back() + 1e-12)
    throw std::invalid_argument("time outside the trajectory");
  if (cfg.epsilon > 0.0 && traj.noise_increments.size() + 1 != traj.times.size())
    throw std::invalid_argument("stochastic residual needs stored noise increments");

  const int nsteps = std::min<int>(int(t / cfg.dt + 0.5), int(traj.times.size()) - 1);
  const VectorField lap_v = horizontal_laplacian(v);

  double acc = inner_l2(traj.states[std::size_t(nsteps)], v) - inner_l2(traj.states[0], v);
  for (int i = 0; i < nsteps; ++i) {
    const VectorField& u = traj.states[std::size_t(i)];
    if (cfg.drift.viscous) acc += -cfg.dt * cfg.drift.nu * inner_l2(u, lap_v);
    if (cfg.drift.convective) acc += -cfg.dt * trilinear(u, v, u);
    if (cfg.drift.damping)
      acc += cfg.dt * inner_l2(damping(u, cfg.drift.a, cfg.drift.alpha), v);
    if (cfg.epsilon > 0.0) {
      const VectorField sdw = project_to_galerkin(
          apply_sigma(traj.times[std::size_t(i)], u, traj.noise_increments[std::size_t(i)],
                      noise, cfg.noise_cutoff),
          cfg);
      acc -= std::sqrt(cfg.epsilon) * inner_l2(sdw, v);
    }
  }
  return std::abs(acc);
}

CoupleReport couple_runs(const SolverConfig& cfg, const VectorField& u0_a,
                         const VectorField& u0_b, const NoiseModel& noise,
                         std::uint64_t trajectory_stream) {
  cfg.validate();
  CoupleReport rep;
  VectorField ua = project_to_galerkin(u0_a, cfg);
  VectorField ub = project_to_galerkin(u0_b, cfg);
  const int nsteps = cfg.steps();
  rep.times.reserve(std::size_t(nsteps) + 1);
  rep.dist_l2.reserve(std::size_t(nsteps) + 1);
  auto push = [&](double t) {
    const NormBundle nd = norm_bundle(ua - ub);
    rep.times.push_back(t);
    rep.dist_l2.push_back(nd.l2);
    rep.sup_dist = std::max(rep.sup_dist, nd.l2);
    return nd;
  };
  NormBundle nd = push(0.0);
  for (int i = 0; i < nsteps; ++i) {
    const double t = i * cfg.dt;
    // Same trajectory stream => identical Brownian increments.
    ua = step(ua, t, i, trajectory_stream, cfg, noise);
    ub = step(ub, t, i, trajectory_stream, cfg, noise);
    rep.int_gradh2 += nd.gradh * nd.gradh * cfg.dt;
    nd = push((i + 1) * cfg.dt);
  }
  return rep;
}

}  // namespace anspde
