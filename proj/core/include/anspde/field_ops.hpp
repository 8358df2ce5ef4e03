#pragma once

#include <cstdint>
#include <optional>

#include "anspde/field.hpp"
#include "anspde/grid.hpp"

namespace anspde {

/// Horizontal/vertical Sobolev weights: ||f||^2 = Vol * sum_k
/// (1+|k_h|^{2s})(1+|k_3|^{2s'}) |fhat|^2, with the convention that a zero
/// index contributes weight 1 (so (0,0) is exactly the L2 norm and (0,1)
/// matches |f|^2 + |d3 f|^2).
struct AnisoIndex {
  double s = 0.0;
  double s_prime = 0.0;
};

struct MixedNormSpec {
  enum class Order { h_outer, v_outer };
  double p = 2.0;  // horizontal exponent
  double q = 2.0;  // vertical exponent
  Order order = Order::h_outer;
};

/// L2-orthogonal projection onto divergence-free fields, mode-wise
/// I - k k^T / |k|^2.
VectorField leray_project(const VectorField& f);

VectorField partial_derivative(const VectorField& f, int axis);  // axis in {1,2,3}

/// Scales mode k by -(k1^2 + k2^2); no vertical smoothing.
VectorField horizontal_laplacian(const VectorField& f);

double aniso_norm(const VectorField& f, const AnisoIndex& idx);
double lp_norm(const VectorField& f, double p);
double mixed_norm(const VectorField& f, const MixedNormSpec& spec);

double inner_l2(const VectorField& a, const VectorField& b);
double inner_01(const VectorField& a, const VectorField& b);  // L2 + d3 pairing

/// The spectral norm pieces every trajectory tracks.
struct NormBundle {
  double l2 = 0.0;        // |u|_{L2}
  double gradh = 0.0;     // |grad_h u|_{L2}
  double d3 = 0.0;        // |d3 u|_{L2}
  double gradh_d3 = 0.0;  // |grad_h d3 u|_{L2}
  double h01() const;
  double h11() const;
  double h10() const;
};
NormBundle norm_bundle(const VectorField& f);

/// |d1 u1 + d2 u2 + d3 u3|_{L2}, the residual the divfree invariant bounds.
double divergence_residual(const VectorField& f);

/// Relative mode-wise divergence max_k |k.uhat| / |uhat|.
double max_relative_divergence(const VectorField& f);

struct RandomFieldOptions {
  bool apply_dealias = true;
  bool zero_mean = true;
  bool exclude_nyquist = true;  // always honored by the generator
};

/// Leray-projected Gaussian field with |uhat(k)| ~ (1+|k|)^{-decay}. Draws
/// are keyed by the signed integer mode triple, so grids of different
/// resolution share the same realization on common modes.
VectorField random_divfree_field(const GridPtr& grid, double decay_exponent,
                                 double amplitude, std::uint64_t seed,
                                 std::uint64_t stream,
                                 const RandomFieldOptions& opts = {});

VectorField apply_dealias_mask(const VectorField& f);

/// Galerkin projection: zero all modes with |m|^2 > radius2.
VectorField apply_shell_mask(const VectorField& f, long radius2);

/// Single real mode amplitude * dir * cos(k.x + phase); dir need not be
/// orthogonal to k (project afterwards if divergence-freeness is wanted).
VectorField single_mode_field(const GridPtr& grid, const std::array<int, 3>& m,
                              const std::array<double, 3>& dir, double amplitude,
                              double phase = 0.0);

ScalarSamples scalar_cosine(const GridPtr& grid, const std::array<int, 3>& m,
                            double amplitude, double phase = 0.0);

}  // namespace anspde
