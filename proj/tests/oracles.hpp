#pragma once

// Independent reference computations the test suites check the library
// against. Everything here is deliberately brute force and shares no code
// path with the implementations under test.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "anspde/field.hpp"
#include "anspde/grid.hpp"

namespace oracle {

using anspde::Grid;
using anspde::VectorField;
using cplx = std::complex<double>;

/// Coefficient at a signed integer mode, reading the conjugate half when
/// m3 < 0.
inline cplx full_coeff(const VectorField& f, int c, int m1, int m2, int m3) {
  const Grid& g = *f.grid;
  bool conj = false;
  if (m3 < 0) {
    m1 = -m1;
    m2 = -m2;
    m3 = -m3;
    conj = true;
  }
  const int j1 = m1 >= 0 ? m1 : m1 + g.n1();
  const int j2 = m2 >= 0 ? m2 : m2 + g.n2();
  const cplx v = f.comp[c][g.spectral_index(j1, j2, m3)];
  return conj ? std::conj(v) : v;
}

/// Brute-force dealiased spectral convolution of u . grad v followed by the
/// divergence-free projection: the reference for the convective evaluator.
/// Sums over every retained mode pair (p, q) with k = p + q, no FFTs.
inline VectorField convective_reference(const VectorField& u, const VectorField& v) {
  const Grid& g = *u.grid;
  const int b1 = g.n1() / 2, b2 = g.n2() / 2, b3 = g.n3() / 2;

  struct Mode {
    int m1, m2, m3;
  };
  std::vector<Mode> kept;
  for (int m1 = -b1 + 1; m1 < b1; ++m1)
    for (int m2 = -b2 + 1; m2 < b2; ++m2)
      for (int m3 = -b3 + 1; m3 < b3; ++m3)
        if (g.dealias_keep(m1, m2, m3)) kept.push_back({m1, m2, m3});

  VectorField out = VectorField::zero(u.grid);
  const double tp = 6.283185307179586476925286766559;
  for (const Mode& p : kept) {
    std::array<cplx, 3> up;
    for (int c = 0; c < 3; ++c) up[c] = full_coeff(u, c, p.m1, p.m2, p.m3);
    if (up[0] == 0.0 && up[1] == 0.0 && up[2] == 0.0) continue;
    for (const Mode& q : kept) {
      const int k1 = p.m1 + q.m1, k2 = p.m2 + q.m2, k3 = p.m3 + q.m3;
      if (!g.dealias_keep(k1, k2, k3)) continue;
      if (k3 < 0) continue;  // fill the stored half; mirrored pairs cover it
      const std::array<double, 3> qk = {tp * q.m1 / g.box_lengths()[0],
                                        tp * q.m2 / g.box_lengths()[1],
                                        tp * q.m3 / g.box_lengths()[2]};
      std::array<cplx, 3> vq;
      for (int c = 0; c < 3; ++c) vq[c] = full_coeff(v, c, q.m1, q.m2, q.m3);
      const cplx udotq = up[0] * cplx(0.0, qk[0]) + up[1] * cplx(0.0, qk[1]) +
                         up[2] * cplx(0.0, qk[2]);
      const int j1 = k1 >= 0 ? k1 : k1 + g.n1();
      const int j2 = k2 >= 0 ? k2 : k2 + g.n2();
      const std::size_t idx = g.spectral_index(j1, j2, k3);
      for (int c = 0; c < 3; ++c) out.comp[c][idx] += udotq * vq[c];
    }
  }
  // Projection I - k k^T/|k|^2, written out independently.
  g.for_each_spectral([&](std::size_t idx, int j1, int j2, int j3) {
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double k3 = g.wavenumber(2, j3);
    const double kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (kk == 0.0) return;
    const cplx dot = k1 * out.comp[0][idx] + k2 * out.comp[1][idx] + k3 * out.comp[2][idx];
    out.comp[0][idx] -= k1 * dot / kk;
    out.comp[1][idx] -= k2 * dot / kk;
    out.comp[2][idx] -= k3 * dot / kk;
  });
  out.divfree = true;
  return out;
}

/// L2 pairing by direct half-spectrum summation.
inline double pairing_reference(const VectorField& a, const VectorField& b) {
  const Grid& g = *a.grid;
  double acc = 0.0;
  g.for_each_spectral([&](std::size_t i, int, int, int j3) {
    const double w = (j3 == 0 || j3 == g.n3() / 2) ? 1.0 : 2.0;
    for (int c = 0; c < 3; ++c)
      acc += w * (a.comp[c][i].real() * b.comp[c][i].real() +
                  a.comp[c][i].imag() * b.comp[c][i].imag());
  });
  return acc * g.volume();
}

/// 2D quadrature of the horizontal Gagliardo-Nirenberg quotient for an
/// analytic slice profile, on a fine reference grid.
inline double gn_quotient_2d(const std::function<double(double, double)>& phi,
                             const std::function<double(double, double)>& dphi_dx,
                             const std::function<double(double, double)>& dphi_dy,
                             double lx, double ly, int n = 512) {
  double l4 = 0.0, l2 = 0.0, gh = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = lx * i / n, y = ly * j / n;
      const double p = phi(x, y);
      l4 += p * p * p * p;
      l2 += p * p;
      const double gx = dphi_dx(x, y), gy = dphi_dy(x, y);
      gh += gx * gx + gy * gy;
    }
  const double da = lx * ly / double(n) / double(n);
  l4 = std::pow(l4 * da, 0.25);
  l2 = std::sqrt(l2 * da);
  gh = std::sqrt(gh * da);
  return l4 / std::sqrt(gh * l2);
}

/// Variation-of-constants solution of dy = -lambda y dt + g(t) dt by
/// high-resolution Simpson quadrature.
inline double linear_ode_reference(double y0, double lambda,
                                   const std::function<double(double)>& g, double t,
                                   int panels = 20000) {
  double integral = 0.0;
  const double h = t / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = i * h, b = a + h, mid = a + 0.5 * h;
    auto f = [&](double s) { return std::exp(-lambda * (t - s)) * g(s); };
    integral += h / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
  }
  return std::exp(-lambda * t) * y0 + integral;
}

/// Scalar brute-force monotonicity quotient scan over random 3-vector pairs.
inline double monotonicity_min_over_pairs(double alpha, int count, std::uint64_t seed,
                                          const std::function<double(std::uint64_t, int)>& draw) {
  double worst = 1e300;
  (void)seed;
  for (int i = 0; i < count; ++i) {
    std::array<double, 3> y, z;
    for (int c = 0; c < 3; ++c) {
      y[std::size_t(c)] = draw(std::uint64_t(i), c);
      z[std::size_t(c)] = draw(std::uint64_t(i), 3 + c);
    }
    const double ny = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    const double nz = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    double dot = 0.0, dist2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = y[std::size_t(c)] - z[std::size_t(c)];
      dot += (std::pow(ny, 2 * alpha) * y[std::size_t(c)] -
              std::pow(nz, 2 * alpha) * z[std::size_t(c)]) *
             d;
      dist2 += d * d;
    }
    if (dist2 == 0.0) continue;
    worst = std::min(worst, dot / (dist2 * std::pow(ny + nz, 2 * alpha)));
  }
  return worst;
}

}  // namespace oracle
