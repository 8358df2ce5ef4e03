#include "anspde/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "anspde/fft.hpp"

namespace anspde {

namespace {

double vec_norm(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

double monotonicity_gap(const std::array<double, 3>& y, const std::array<double, 3>& z,
                        double alpha, double kappa) {
  const double ny = vec_norm(y), nz = vec_norm(z);
  const double wy = ny > 0.0 ? std::pow(ny, 2.0 * alpha) : 0.0;
  const double wz = nz > 0.0 ? std::pow(nz, 2.0 * alpha) : 0.0;
  double dot = 0.0, dist2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double d = y[c] - z[c];
    dot += (wy * y[c] - wz * z[c]) * d;
    dist2 += d * d;
  }
  const double s = ny + nz;
  return dot - kappa * dist2 * (s > 0.0 ? std::pow(s, 2.0 * alpha) : 0.0);
}

double monotonicity_ratio(const std::array<double, 3>& y, const std::array<double, 3>& z,
                          double alpha) {
  const double ny = vec_norm(y), nz = vec_norm(z);
  const double wy = ny > 0.0 ? std::pow(ny, 2.0 * alpha) : 0.0;
  const double wz = nz > 0.0 ? std::pow(nz, 2.0 * alpha) : 0.0;
  double dot = 0.0, dist2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    const double d = y[c] - z[c];
    dot += (wy * y[c] - wz * z[c]) * d;
    dist2 += d * d;
  }
  const double den = dist2 * std::pow(ny + nz, 2.0 * alpha);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return dot / den;
}

namespace {

// Reduced quotient at |y| = 1, |z| = rho, angle theta.
double reduced_ratio(double rho, double ct, double alpha) {
  const double num = 1.0 - (1.0 + std::pow(rho, 2.0 * alpha)) * rho * ct +
                     std::pow(rho, 2.0 * alpha + 2.0);
  const double den =
      (1.0 + rho * rho - 2.0 * rho * ct) * std::pow(1.0 + rho, 2.0 * alpha);
  if (den <= 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

double kappa_star_scan(double alpha, int n_rho, int n_theta) {
  const double pi = 3.14159265358979323846;
  double best = std::numeric_limits<double>::infinity();
  double best_rho = 1.0, best_th = pi;
  for (int i = 0; i <= n_rho; ++i) {
    const double rho = double(i) / n_rho;
    for (int j = 0; j <= n_theta; ++j) {
      const double th = pi * double(j) / n_theta;
      if (rho > 1.0 - 1e-12 && th < 1e-12) continue;  // y == z
      const double r = reduced_ratio(rho, std::cos(th), alpha);
      if (r < best) {
        best = r;
        best_rho = rho;
        best_th = th;
      }
    }
  }
  // Local refinement around the scan minimum.
  double lo_r = std::max(0.0, best_rho - 2.0 / n_rho);
  double hi_r = std::min(1.0, best_rho + 2.0 / n_rho);
  double lo_t = std::max(0.0, best_th - 2.0 * pi / n_theta);
  double hi_t = std::min(pi, best_th + 2.0 * pi / n_theta);
  for (int pass = 0; pass < 6; ++pass) {
    double prho = best_rho, pth = best_th;
    for (int i = 0; i <= 64; ++i) {
      const double rho = lo_r + (hi_r - lo_r) * i / 64.0;
      for (int j = 0; j <= 64; ++j) {
        const double th = lo_t + (hi_t - lo_t) * j / 64.0;
        if (rho > 1.0 - 1e-12 && th < 1e-12) continue;
        const double r = reduced_ratio(rho, std::cos(th), alpha);
        if (r < best) {
          best = r;
          prho = rho;
          pth = th;
        }
      }
    }
    const double wr = (hi_r - lo_r) / 8.0, wt = (hi_t - lo_t) / 8.0;
    lo_r = std::max(0.0, prho - wr);
    hi_r = std::min(1.0, prho + wr);
    lo_t = std::max(0.0, pth - wt);
    hi_t = std::min(pi, pth + wt);
    best_rho = prho;
    best_th = pth;
  }
  return best;
}

std::optional<double> bound_ratio_B(const VectorField& phi, const VectorField& psi,
                                    const VectorField& v) {
  const double lhs = std::abs(trilinear(phi, psi, v));
  const NormBundle nv = norm_bundle(v);
  const NormBundle nphi = norm_bundle(phi);
  const NormBundle npsi = norm_bundle(psi);
  const double den = nv.h11() * std::sqrt(nphi.gradh * npsi.gradh) *
                     std::sqrt(nphi.l2 * npsi.l2);
  if (!(den > 0.0) || !std::isfinite(den)) return std::nullopt;
  return lhs / den;
}

double gn_slice_ratio(const VectorField& f) {
  const Grid& g = *f.grid;
  const PhysicalField u = fft::to_physical(f);
  const PhysicalField d1 = fft::to_physical(partial_derivative(f, 1));
  const PhysicalField d2 = fft::to_physical(partial_derivative(f, 2));
  const double da = (g.box_lengths()[0] / g.n1()) * (g.box_lengths()[1] / g.n2());
  const double two_pi = 6.283185307179586476925286766559;
  const double kmin = two_pi / std::max(g.box_lengths()[0], g.box_lengths()[1]);

  double best = 0.0;
  bool any = false;
  for (int c = 0; c < 3; ++c) {
    for (int j3 = 0; j3 < g.n3(); ++j3) {
      double l4 = 0.0, l2 = 0.0, gh = 0.0;
      for (int j1 = 0; j1 < g.n1(); ++j1)
        for (int j2 = 0; j2 < g.n2(); ++j2) {
          const std::size_t i = g.physical_index(j1, j2, j3);
          const double p = u.comp[c][i];
          l4 += p * p * p * p;
          l2 += p * p;
          gh += d1.comp[c][i] * d1.comp[c][i] + d2.comp[c][i] * d2.comp[c][i];
        }
      l4 = std::pow(l4 * da, 0.25);
      l2 = std::sqrt(l2 * da);
      gh = std::sqrt(gh * da);
      if (l2 == 0.0 || gh <= 1e-12 * kmin * l2) continue;  // degenerate slice
      best = std::max(best, l4 / std::sqrt(gh * l2));
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("all slices degenerate");
  return best;
}

double d3B_pairing(const VectorField& u) {
  const VectorField b = convective(u, u);
  return inner_l2(partial_derivative(b, 3), partial_derivative(u, 3));
}

double d3B_bound_rhs(const VectorField& u, const InequalityParams& p) {
  const NormBundle nb = norm_bundle(u);
  const double weighted = vertical_damping_quadratures(u, p.alpha).mag_d3;
  return p.c * (p.eps0 * nb.gradh_d3 * nb.gradh_d3 +
                p.eps1 / (4.0 * p.eps0) * weighted +
                p.c_alpha / (p.eps0 * std::pow(p.eps1, 1.0 / (p.alpha - 1.0))) *
                    nb.d3 * nb.d3);
}

std::pair<double, double> young_triple_bound(const ScalarSamples& f, const ScalarSamples& g,
                                             const ScalarSamples& h, double alpha,
                                             double eps0, double eps1, double c_alpha) {
  const Grid& grid = *f.grid;
  double fgh = 0.0, h2 = 0.0, fg2 = 0.0, g2 = 0.0;
  for (std::size_t i = 0; i < grid.physical_size(); ++i) {
    fgh += f.v[i] * g.v[i] * h.v[i];
    h2 += h.v[i] * h.v[i];
    g2 += g.v[i] * g.v[i];
    const double fa = std::pow(std::abs(f.v[i]), alpha);
    fg2 += fa * fa * g.v[i] * g.v[i];
  }
  const double dv = grid.cell_volume();
  const double lhs = std::abs(fgh * dv);
  const double rhs = eps0 * h2 * dv + eps1 / (4.0 * eps0) * fg2 * dv +
                     c_alpha / (eps0 * std::pow(eps1, 1.0 / (alpha - 1.0))) * g2 * dv;
  return {lhs, rhs};
}

std::pair<double, double> F_diff_pairing(const VectorField& u, const VectorField& v,
                                         const DriftParams& dp, const InequalityParams& q) {
  require_same_grid(u, v);
  const VectorField U = u - v;
  const VectorField fu = drift(u, dp);
  const VectorField fv = drift(v, dp);
  const double lhs = inner_l2(fu - fv, U);
  const NormBundle nU = norm_bundle(U);
  const NormBundle nv = norm_bundle(v);
  const double rhs = -q.eta * nU.gradh * nU.gradh +
                     q.c_eta * nv.h11() * nv.h11() * nU.l2 * nU.l2 -
                     dp.a * q.kappa * weighted_difference_norm2(u, v, dp.alpha);
  return {lhs, rhs};
}

std::optional<double> stat_majB(const VectorField& phi, const VectorField& psi,
                                const VectorField& v) {
  return bound_ratio_B(phi, psi, v);
}

double stat_gn(const VectorField& f) { return gn_slice_ratio(f); }

double stat_d3B(const VectorField& u, double alpha, double eps0, double eps1) {
  InequalityParams p;
  p.alpha = alpha;
  p.eps0 = eps0;
  p.eps1 = eps1;
  p.c = 1.0;
  p.c_alpha = 1.0;
  const double den = d3B_bound_rhs(u, p);
  if (!(den > 0.0)) return 0.0;
  return std::abs(d3B_pairing(u)) / den;
}

double stat_fgh(const ScalarSamples& f, const ScalarSamples& g, const ScalarSamples& h,
                double alpha, double eps0, double eps1) {
  const auto [lhs, rhs0] = young_triple_bound(f, g, h, alpha, eps0, eps1, 0.0);
  const Grid& grid = *g.grid;
  double g2 = 0.0;
  for (double x : g.v) g2 += x * x;
  g2 *= grid.cell_volume();
  const double third = g2 / (eps0 * std::pow(eps1, 1.0 / (alpha - 1.0)));
  if (!(third > 0.0)) return 0.0;
  return std::max(0.0, lhs - rhs0) / third;
}

double stat_Fdiff(const VectorField& u, const VectorField& v, const DriftParams& dp,
                  double eta, double kappa) {
  const VectorField U = u - v;
  const double lhs = inner_l2(drift(u, dp) - drift(v, dp), U);
  const NormBundle nU = norm_bundle(U);
  const NormBundle nv = norm_bundle(v);
  const double den = nv.h11() * nv.h11() * nU.l2 * nU.l2;
  if (!(den > 0.0)) return 0.0;
  const double num = lhs + eta * nU.gradh * nU.gradh +
                     dp.a * kappa * weighted_difference_norm2(u, v, dp.alpha);
  return num / den;
}

}  // namespace anspde
