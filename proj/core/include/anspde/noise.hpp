#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "anspde/field_ops.hpp"
#include "anspde/rng.hpp"

namespace anspde {

/// Truncated Q-Wiener eigenstructure: divergence-free Fourier eigenfields,
/// orthonormal in the (.,.)_{0,1} product, with nonincreasing eigenvalues
/// q_k = q0 * k^{-r}.
struct NoiseBasis {
  GridPtr grid;
  std::vector<VectorField> modes;
  std::vector<double> q;

  int size() const { return int(modes.size()); }

  static NoiseBasis make_fourier(const GridPtr& grid, int n_w, double q0, double r);
};

/// Scalar multiplier field with bounded vertical derivative. `value` scales
/// the unit-amplitude shape; per-mode coefficients decay as k^{-mode_decay}.
/// Kind::file takes the first component of an ANSF snapshot as the shape
/// (loaded once through `load_shape`).
struct MultiplierSpec {
  enum class Kind { zero, constant, single_mode, file };
  Kind kind = Kind::zero;
  double value = 0.0;
  double mode_decay = 1.0;
  std::array<int, 3> m{1, 0, 0};
  double phase = 0.0;
  std::string path;
  std::shared_ptr<const std::vector<double>> samples;  // loaded file shape
  double samples_sup = 0.0;
  double samples_d3_sup = 0.0;

  bool active() const { return kind != Kind::zero && value != 0.0; }
  void load_shape(const GridPtr& grid);
};

/// Additive part sigma_{k,0} = amplitude * k^{-mode_decay} * shape_k, where
/// shape_k is the k-th eigenfield (Kind::basis) or one snapshot field shared
/// by every mode (Kind::file).
struct AdditiveSpec {
  enum class Kind { zero, basis, file };
  Kind kind = Kind::zero;
  double amplitude = 0.0;
  double mode_decay = 1.0;
  std::string path;
  std::shared_ptr<const VectorField> field;  // loaded file shape

  bool active() const { return kind != Kind::zero && amplitude != 0.0; }
  void load_shape(const GridPtr& grid);
};

/// Smooth global time factor theta(t) = 1 + amplitude * sin(2 pi t / period).
struct TimeModulation {
  double amplitude = 0.0;
  double period = 1.0;

  double factor(double t) const;
  double rate() const;  // sup |theta'|
  double sup() const { return 1.0 + std::abs(amplitude); }
};

/// Multiplicative diffusion coefficient. Family example1 is affine in
/// (u, grad_h u); example2 passes u through a bounded Lipschitz saturation.
struct DiffusionCoefficient {
  enum class Family { example1, example2_lipschitz };
  Family family = Family::example1;
  AdditiveSpec sigma0;
  MultiplierSpec sigma1;
  MultiplierSpec sigma2;    // multiplies d1 u
  MultiplierSpec sigma2t;   // multiplies d2 u
  bool gradient_terms_enabled = false;
  TimeModulation time_mod;
  double example2_saturation = 1.0;

  void validate() const;
};

struct ConditionConstants {
  double K0 = 0.0, K1 = 0.0, K2 = 0.0;
  double Kt0 = 0.0, Kt1 = 0.0, Kt2 = 0.0;
  double L1 = 0.0, L2 = 0.0;
  double gamma = 1.0;
  double holder_C = 0.0;
};

struct NoiseModel {
  NoiseBasis basis;
  DiffusionCoefficient coef;
};

/// Closed-form growth/Lipschitz constants for the affine family.
ConditionConstants constants_from_example1(const NoiseModel& m);

/// Brownian coefficient increments: xi_k ~ N(0, dt) iid, keyed by
/// (seed, trajectory stream, step, k).
std::vector<double> sample_increment(const NoiseBasis& basis, double dt,
                                     const CounterRng& rng, std::uint64_t step);

/// The field-space element sum_k sqrt(q_k) xi_k psi_k.
VectorField noise_field(const NoiseBasis& basis, const std::vector<double>& xi);

/// Response sum_k xi_k sigma_k(t, x, u, grad_h u), Leray-projected.
/// `cutoff` < 0 uses every basis mode.
VectorField apply_sigma(double t, const VectorField& u, const std::vector<double>& xi,
                        const NoiseModel& m, int cutoff = -1);

enum class HsSpace { L, Ltilde };

/// Squared Hilbert-Schmidt norm of the (optionally doubly truncated)
/// response operator: sum over modes of the squared L2 or (0,1) norm of the
/// projected per-mode response. shell_radius2 < 0 skips the outer Galerkin
/// truncation.
double hs_norm2(const NoiseModel& m, double t, const VectorField& u, HsSpace space,
                int cutoff = -1, long shell_radius2 = -1);
double hs_norm(const NoiseModel& m, double t, const VectorField& u, HsSpace space,
               int cutoff = -1, long shell_radius2 = -1);

/// Squared HS norm of sigma(t,u) - sigma(t,v).
double hs_diff_norm2(const NoiseModel& m, double t, const VectorField& u,
                     const VectorField& v, HsSpace space);

/// Squared HS norm of sigma(t1,u) - sigma(t2,u) in L.
double hs_time_diff_norm2(const NoiseModel& m, double t1, double t2, const VectorField& u);

struct AuditViolation {
  std::string inequality;
  int sample = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct AuditReport {
  bool passed = true;
  std::vector<AuditViolation> violations;
  // Worst slack rhs - lhs per inequality (negative means violated).
  double margin_growth_L = 0.0;
  double margin_growth_Lt = 0.0;
  double margin_lipschitz = 0.0;
  double margin_holder = 0.0;
  bool k2_threshold_ok = true;  // Kt2 < 2 nu / 21
};

/// Checks the growth, Lipschitz, noise-threshold and time-Hoelder bounds on
/// an ensemble of (t, u, v) samples.
AuditReport audit_condition(const NoiseModel& m, const ConditionConstants& c,
                            const std::vector<double>& times,
                            const std::vector<VectorField>& us,
                            const std::vector<VectorField>& vs, double nu);

}  // namespace anspde
