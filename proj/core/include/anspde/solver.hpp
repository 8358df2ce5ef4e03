#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anspde/control.hpp"
#include "anspde/noise.hpp"
#include "anspde/nonlinear.hpp"

namespace anspde {

enum class Scheme { em_integrating_factor, em_plain };

struct SolverConfig {
  DriftParams drift;
  GridPtr grid;
  int galerkin_cutoff = 8;   // shell index; see Grid::shell_radius2
  int noise_cutoff = -1;     // -1: whole basis
  double dt = 1e-2;
  double T = 1.0;
  double epsilon = 0.0;      // noise scale; sqrt(epsilon) multiplies dW
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::em_integrating_factor;

  // Recording knobs.
  int state_stride = 0;          // 0: keep no snapshots; 1: every step
  bool record_ledger = false;
  bool store_noise_increments = false;

  int steps() const { return int(T / dt + 0.5); }

  void validate() const {
    drift.validate();
    if (!grid) throw std::invalid_argument("config needs a grid");
    if (!(dt > 0.0) || !(T > 0.0) || dt >= T)
      throw std::invalid_argument("need 0 < dt < T");
    if (epsilon < 0.0) throw std::invalid_argument("epsilon must be nonnegative");
    const long r2 = Grid::shell_radius2(galerkin_cutoff);
    const double band = grid->dealias_fraction() *
                        std::min({grid->n1(), grid->n2(), grid->n3()}) / 2.0;
    if (std::sqrt(double(r2)) > band)
      throw std::invalid_argument("galerkin shell does not fit inside the dealias band");
  }
};

/// Per-step integrated pieces of the (0,1)-energy identity. Each slot is the
/// pairing of the implemented drift/noise term with the state, so the step
/// residual is pure time-discretization error.
struct LedgerRow {
  double viscous = 0.0;       // exact dissipation of the viscous factor (<= 0)
  double damping = 0.0;       // -2 <d, u> dt                (<= 0)
  double vertical_damping = 0.0;  // -2 <d3 d, d3 u> dt
  double convective = 0.0;    // 2 (-B, u)_{0,1} dt (the d3 pairing survives)
  double martingale = 0.0;    // 2 (noise increment, u)_{0,1}
  double ito_correction = 0.0;  // eps |P_n sigma Pi_n|^2_Ltilde dt
  double control = 0.0;       // 2 (sigma phi, u)_{0,1} dt
  double observed = 0.0;      // ||u_{i+1}||_{0,1}^2 - ||u_i||_{0,1}^2
  double residual = 0.0;
};

struct Trajectory {
  SolverConfig cfg;
  std::vector<double> times;      // step grid, times[0] = 0
  std::vector<double> l2, gradh, d3, gradh_d3, l2a2;  // norm series per step
  std::vector<double> state_times;
  std::vector<VectorField> states;
  std::vector<std::vector<double>> noise_increments;  // xi per step, if stored
  std::vector<LedgerRow> ledger;

  double h01(std::size_t i) const { return std::hypot(l2[i], d3[i]); }
  double h11(std::size_t i) const {
    return std::sqrt(l2[i] * l2[i] + d3[i] * d3[i] + gradh[i] * gradh[i] +
                     gradh_d3[i] * gradh_d3[i]);
  }
  double h10(std::size_t i) const { return std::hypot(l2[i], gradh[i]); }
};

class BlowupError : public std::runtime_error {
 public:
  BlowupError(int step, const std::string& norm, double value)
      : std::runtime_error("solution blew up at step " + std::to_string(step) +
                           " (" + norm + " = " + std::to_string(value) + ")"),
        step_(step),
        norm_(norm) {}
  int step() const { return step_; }
  const std::string& norm() const { return norm_; }

 private:
  int step_;
  std::string norm_;
};

/// One Euler-Maruyama step with exact integrating-factor treatment of the
/// horizontal viscosity. `trajectory_stream` keys the RNG so ensembles can
/// run in any order. Passing a control adds the sigma(t,u) phi(t) drift.
VectorField step(const VectorField& state, double t, int step_index,
                 std::uint64_t trajectory_stream, const SolverConfig& cfg,
                 const NoiseModel& noise, const Control* control = nullptr,
                 LedgerRow* ledger = nullptr, std::vector<double>* xi_out = nullptr);

/// Projects onto the Galerkin shell + dealias band and enforces
/// divergence-freeness.
VectorField project_to_galerkin(const VectorField& u, const SolverConfig& cfg);

Trajectory run_galerkin(const SolverConfig& cfg, const VectorField& u0,
                        const NoiseModel& noise, std::uint64_t trajectory_stream = 0);

/// Deterministic control equation du = F(u) dt + sigma(t,u) phi(t) dt.
Trajectory run_skeleton(const SolverConfig& cfg, const VectorField& u0,
                        const NoiseModel& noise, const Control& control);

/// Stochastic control equation (noise + control drift together).
Trajectory run_controlled(const SolverConfig& cfg, const VectorField& u0,
                          const NoiseModel& noise, const Control& control,
                          std::uint64_t trajectory_stream = 0);

/// Residual of the integrated weak form against a band-limited test field at
/// time t, using the trajectory's own step grid for quadrature. Requires
/// dense states (state_stride = 1); stochastic runs must also have stored
/// noise increments.
double weak_form_residual(const Trajectory& traj, const VectorField& v, double t,
                          const NoiseModel& noise);

struct CoupleReport {
  std::vector<double> times;
  std::vector<double> dist_l2;    // |u_a - u_b|_{L2} per step
  double sup_dist = 0.0;
  double int_gradh2 = 0.0;        // integral of |grad_h (u_a - u_b)|^2 dt
};

/// Advances two initial conditions through the same noise path in lockstep.
CoupleReport couple_runs(const SolverConfig& cfg, const VectorField& u0_a,
                         const VectorField& u0_b, const NoiseModel& noise,
                         std::uint64_t trajectory_stream = 0);

}  // namespace anspde
