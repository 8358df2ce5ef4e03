#pragma once

#include <stdexcept>

#include "anspde/field.hpp"
#include "anspde/field_ops.hpp"

namespace anspde {

/// Drift parameters: horizontal viscosity, damping coefficient and exponent,
/// plus per-term toggles.
struct DriftParams {
  double nu = 0.1;
  double a = 0.5;
  double alpha = 1.5;
  bool viscous = true;
  bool convective = true;
  bool damping = true;

  void validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    if (!(a > 0.0)) throw std::invalid_argument("a must be positive");
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  }
};

/// Dealiased pseudo-spectral convective term P_div(u . grad v).
/// Bilinear; inputs must be divergence-free and share one grid.
VectorField convective(const VectorField& u, const VectorField& v);

/// <B(u,v), w> in L2.
double trilinear(const VectorField& u, const VectorField& v, const VectorField& w);

struct DampingResult {
  VectorField field;        // a * P_div(|u|^{2 alpha} u), band-limited
  double pairing = 0.0;     // <field, u> = a * fine-grid integral of |u|^{2a+2}
  double l2a2 = 0.0;        // ||u||_{L^{2a+2}} on the oversampled grid
  double max_abs_u = 0.0;   // sup_x |u(x)| on the oversampled grid
};

/// Nonlinear damping evaluated on a factor-2 oversampled physical grid,
/// transformed back, truncated and projected.
DampingResult damping_with_diagnostics(const VectorField& u, double a, double alpha);
VectorField damping(const VectorField& u, double a, double alpha);

/// Full drift nu*Lap_h u - B(u,u) - a|u|^{2 alpha} u with toggles.
VectorField drift(const VectorField& u, const DriftParams& p);

/// Quadrature of (|u|+|v|)^{2 alpha} |u-v|^2 on the oversampled grid.
double weighted_difference_norm2(const VectorField& u, const VectorField& v, double alpha);

/// Quadratures of |u|^{2 alpha} |d3 u|^2 and |u|^{2 alpha - 2} (u . d3 u)^2
/// on the oversampled grid.
struct VerticalDampingQuadratures {
  double mag_d3 = 0.0;    // integral |u|^{2a} |d3 u|^2
  double cross_d3 = 0.0;  // integral |u|^{2a-2} (u . d3 u)^2
};
VerticalDampingQuadratures vertical_damping_quadratures(const VectorField& u, double alpha);

}  // namespace anspde
