#pragma once

#include <optional>
#include <vector>

#include "anspde/control.hpp"
#include "anspde/solver.hpp"

namespace anspde {

/// The topology of the small-noise limit: sup-in-time L2 plus L2-in-time
/// H^{1,0}.
struct YNorm {
  double sup_l2 = 0.0;
  double int_h10 = 0.0;  // ( int ||u||_{1,0}^2 dt )^{1/2}
  double total() const { return sup_l2 + int_h10; }
};

YNorm y_norm(const Trajectory& traj);

/// Y-distance between two trajectories stored on the same state grid.
double trajectory_y_distance(const Trajectory& a, const Trajectory& b);

inline double control_energy(const Control& c) { return c.energy(); }

struct RateEstimate {
  enum class Status { exact_zero, upper_bound, infeasible };
  double value = 0.0;
  std::optional<Control> achieving;
  double match_residual = 0.0;  // Y-distance of the best candidate
  Status status = Status::infeasible;
};

/// Upper bound on the action functional: forward-solves the skeleton for
/// each candidate, keeps those within tol_Y of the target in Y-distance, and
/// returns the minimal energy among them. Infimum over the supplied family
/// only.
RateEstimate rate_upper_bound(const Trajectory& target, const std::vector<Control>& candidates,
                              const SolverConfig& cfg, const NoiseModel& noise, double tol_Y);

/// Endpoint variant: feasibility means |u(T) - target|_{L2} <= tol_end.
RateEstimate rate_upper_bound_endpoint(const VectorField& target_end,
                                       const std::vector<Control>& candidates,
                                       const SolverConfig& cfg, const NoiseModel& noise,
                                       double tol_end);

/// Deterministic coordinate descent on the control coefficients, minimizing
/// energy + penalty * max(0, distance - tol_Y)^2. Never returns a worse
/// feasible bound than the start.
Control refine_control(const Trajectory& target, const Control& start,
                       const SolverConfig& cfg, const NoiseModel& noise, double tol_Y,
                       int sweeps = 3);

struct WeakConvergenceRow {
  double epsilon = 0.0;
  double mean_y = 0.0;
  double se = 0.0;
};

struct WeakConvergenceResult {
  std::vector<WeakConvergenceRow> rows;
  double slope = 0.0;  // fitted d log mean / d log eps
};

/// Monte Carlo distance between the noise-shifted controlled solution and
/// the shared skeleton, one row per epsilon. Paths reuse the same Brownian
/// streams across epsilons. Requires the gradient-free coefficient regime;
/// audited before any run.
WeakConvergenceResult weak_convergence_experiment(const Control& phi,
                                                  const std::vector<double>& eps_list,
                                                  int m_mc, const SolverConfig& cfg,
                                                  const NoiseModel& noise, int workers = 1);

struct CompactnessPair {
  int i = 0, j = 0;
  double d1 = 0.0;  // weak-topology proxy distance
  double dy = 0.0;  // Y-distance of the skeleton outputs
};

struct CompactnessReport {
  std::vector<CompactnessPair> pairs;
  double mean_dy_low_d1 = 0.0;   // over the smallest-d1 quartile
  double mean_dy_high_d1 = 0.0;  // over the largest-d1 quartile
  bool trend_ok = false;         // low-d1 pairs are closer in Y
};

/// Weak-vs-Y continuity probe on controls sampled from the energy ball
/// boundary and interior.
CompactnessReport compactness_probe(double m_bound, int sample_count,
                                    const SolverConfig& cfg, const NoiseModel& noise,
                                    std::uint64_t seed, int workers = 1);

/// Proxy metric d1(phi,psi) = sum_i 2^{-i} | int (phi - psi, e_i)_0 dt |
/// over the tensor basis (normalized interval indicator) x (coefficient
/// direction), enumerated interval-major.
double control_d1_distance(const Control& a, const Control& b);

}  // namespace anspde
