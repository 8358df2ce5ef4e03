#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anspde/inequalities.hpp"
#include "anspde/solver.hpp"

namespace anspde {

/// Aggregated per-step energy identity terms of one trajectory.
struct EnergyLedger {
  std::vector<double> times;  // left endpoints of the steps
  std::vector<LedgerRow> rows;
  LedgerRow totals;
  double final_residual = 0.0;
  double max_abs_step_residual = 0.0;
};

/// Requires the trajectory to have been run with record_ledger.
EnergyLedger energy_ledger(const Trajectory& traj);

struct MomentEstimate {
  double value = 0.0;
  double se = 0.0;
};

struct MomentReport {
  int samples = 0;
  std::vector<int> cutoffs;
  std::vector<MomentEstimate> sup_h01_pow4;  // E sup_t ||u||_{0,1}^4
  std::vector<MomentEstimate> int_h11_sq;    // E ( int ||u||_{1,1}^2 dt )^2
  std::vector<MomentEstimate> int_l2a2;      // E int ||u||_{L^{2a+2}}^{2a+2} dt
};

struct MomentSpec {
  SolverConfig base;
  std::vector<int> cutoffs{8, 16, 32};
  int samples = 48;
  int workers = 1;
};

/// Monte Carlo moments with jackknife standard errors, one column per
/// Galerkin cutoff, all driven from the same seed so cutoff comparisons use
/// common noise.
MomentReport moment_estimator(const MomentSpec& spec, const NoiseModel& noise,
                              const VectorField& u0);

struct IneqEnsembleSpec {
  std::uint64_t seed = 2024;
  int samples = 200;
  int resolution = 32;
  double decay = 4.0;
  double amplitude = 1.0;
  double alpha = 1.5;
  double eps0 = 1.0;
  double eps1 = 1.0;
  double eta = 0.05;
  double nu = 0.1;
  double a = 0.5;
  int workers = 1;
};

/// Empirical max of each per-sample constant statistic over the ensemble.
struct IneqStats {
  double maj_b = 0.0;
  double gn = 0.0;
  double d3b = 0.0;
  double fgh = 0.0;
  double f_diff = 0.0;
  int degenerate = 0;
};

struct IneqSuiteReport {
  IneqEnsembleSpec spec;
  std::vector<IneqRow> rows;
  IneqStats stats;
  bool passed = true;                 // all inequalities hold with the frozen constants
  std::vector<std::string> failures;  // named inequality + sample
};

IneqSuiteReport inequality_suite(const IneqEnsembleSpec& spec);

struct GronwallPath {
  std::vector<double> X, Y, I, phi;  // sampled on the shared time grid
  double Z = 0.0;
};

struct GronwallInput {
  std::vector<double> times;
  std::vector<GronwallPath> paths;
  double C = 0.0;
  double kappa = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double Ctilde = 0.0;
};

struct GronwallResult {
  bool hypotheses_ok = false;
  std::string violated;        // empty when hypotheses hold
  std::vector<double> bound;   // 2 exp(C + 2 t gamma e^C) (E Z + Ctilde)
  bool holds = false;          // E[X + kappa Y] <= bound at every time
  double worst_margin = 0.0;   // min over t of bound - E[X + kappa Y]
};

GronwallResult gronwall_bound(const GronwallInput& in);

/// Monte Carlo dyadic time-increment statistic: mean over trajectories of
/// 1_{G_N} int_0^T { |u(s) - u(s_bar)|_{L2}^2 + window integrals } ds with
/// s_bar the right endpoint of the dyadic interval of length T 2^{-n}.
/// Trajectories need stored states resolving the dyadic grid.
double time_increment_stat(const std::vector<Trajectory>& ensemble, int n_dyadic,
                           double norm_cap);

/// Default norm cap: 10x the ensemble median of the capped quantity.
double default_norm_cap(const std::vector<Trajectory>& ensemble);

}  // namespace anspde
