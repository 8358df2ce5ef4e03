#include "anspde/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anspde/fft.hpp"
#include "anspde/rng.hpp"

namespace anspde {

namespace {

inline double sobolev_weight(double k2, double index) {
  if (index == 0.0) return 1.0;
  return 1.0 + std::pow(k2, index);
}

}  // namespace

double NormBundle::h01() const { return std::sqrt(l2 * l2 + d3 * d3); }
double NormBundle::h11() const {
  return std::sqrt(l2 * l2 + d3 * d3 + gradh * gradh + gradh_d3 * gradh_d3);
}
double NormBundle::h10() const { return std::sqrt(l2 * l2 + gradh * gradh); }

VectorField leray_project(const VectorField& f) {
  VectorField r = f;
  const Grid& g = *f.grid;
  g.for_each_spectral([&](std::size_t idx, int j1, int j2, int j3) {
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double k3 = g.wavenumber(2, j3);
    const double kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (kk == 0.0) return;
    const std::complex<double> kdotu =
        k1 * r.comp[0][idx] + k2 * r.comp[1][idx] + k3 * r.comp[2][idx];
    const std::complex<double> s = kdotu / kk;
    r.comp[0][idx] -= k1 * s;
    r.comp[1][idx] -= k2 * s;
    r.comp[2][idx] -= k3 * s;
  });
  r.divfree = true;
  return r;
}

VectorField partial_derivative(const VectorField& f, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2 or 3");
  VectorField r = f;
  const Grid& g = *f.grid;
  const int d = axis - 1;
  g.for_each_spectral([&](std::size_t idx, int j1, int j2, int j3) {
    const int j = d == 0 ? j1 : (d == 1 ? j2 : j3);
    const std::complex<double> ik(0.0, g.deriv_wavenumber(d, j));
    for (int c = 0; c < 3; ++c) r.comp[c][idx] *= ik;
  });
  r.divfree = f.divfree;
  return r;
}

VectorField horizontal_laplacian(const VectorField& f) {
  VectorField r = f;
  const Grid& g = *f.grid;
  g.for_each_spectral([&](std::size_t idx, int j1, int j2, int j3) {
    (void)j3;
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double m = -(k1 * k1 + k2 * k2);
    for (int c = 0; c < 3; ++c) r.comp[c][idx] *= m;
  });
  r.divfree = f.divfree;
  return r;
}

double aniso_norm(const VectorField& f, const AnisoIndex& idx) {
  if (idx.s < 0.0 || idx.s_prime < 0.0)
    throw std::invalid_argument("negative anisotropic indices are not supported");
  const Grid& g = *f.grid;
  double acc = 0.0;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double k3 = g.wavenumber(2, j3);
    const double wh = sobolev_weight(k1 * k1 + k2 * k2, idx.s);
    const double wv = sobolev_weight(k3 * k3, idx.s_prime);
    double mag2 = 0.0;
    for (int c = 0; c < 3; ++c) mag2 += std::norm(f.comp[c][i]);
    acc += g.hermitian_weight(j3) * wh * wv * mag2;
  });
  return std::sqrt(g.volume() * acc);
}

double lp_norm(const VectorField& f, double p) {
  if (p < 1.0) throw std::invalid_argument("p must be >= 1");
  const PhysicalField u = fft::to_physical(f);
  const Grid& g = *f.grid;
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.physical_size(); ++i) {
      const double a2 = u.comp[0][i] * u.comp[0][i] + u.comp[1][i] * u.comp[1][i] +
                        u.comp[2][i] * u.comp[2][i];
      m = std::max(m, a2);
    }
    return std::sqrt(m);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < g.physical_size(); ++i) {
    const double a2 = u.comp[0][i] * u.comp[0][i] + u.comp[1][i] * u.comp[1][i] +
                      u.comp[2][i] * u.comp[2][i];
    acc += std::pow(a2, 0.5 * p);
  }
  return std::pow(acc * g.cell_volume(), 1.0 / p);
}

double mixed_norm(const VectorField& f, const MixedNormSpec& spec) {
  if (spec.p < 1.0 || spec.q < 1.0) throw std::invalid_argument("exponents must be >= 1");
  const PhysicalField u = fft::to_physical(f);
  const Grid& g = *f.grid;
  const int n1 = g.n1(), n2 = g.n2(), n3 = g.n3();
  const double dv = g.box_lengths()[2] / n3;
  const double dh = (g.box_lengths()[0] / n1) * (g.box_lengths()[1] / n2);

  auto mag = [&](int j1, int j2, int j3) {
    const std::size_t i = g.physical_index(j1, j2, j3);
    return std::sqrt(u.comp[0][i] * u.comp[0][i] + u.comp[1][i] * u.comp[1][i] +
                     u.comp[2][i] * u.comp[2][i]);
  };

  const bool p_inf = std::isinf(spec.p);
  const bool q_inf = std::isinf(spec.q);

  if (spec.order == MixedNormSpec::Order::h_outer) {
    // Inner L^q over x3, outer L^p over x_h.
    double outer = 0.0;
    for (int j1 = 0; j1 < n1; ++j1) {
      for (int j2 = 0; j2 < n2; ++j2) {
        double inner = 0.0;
        for (int j3 = 0; j3 < n3; ++j3) {
          const double a = mag(j1, j2, j3);
          inner = q_inf ? std::max(inner, a) : inner + std::pow(a, spec.q);
        }
        const double col = q_inf ? inner : std::pow(inner * dv, 1.0 / spec.q);
        outer = p_inf ? std::max(outer, col) : outer + std::pow(col, spec.p);
      }
    }
    return p_inf ? outer : std::pow(outer * dh, 1.0 / spec.p);
  }

  // Inner L^p over x_h, outer L^q over x3.
  double outer = 0.0;
  for (int j3 = 0; j3 < n3; ++j3) {
    double inner = 0.0;
    for (int j1 = 0; j1 < n1; ++j1) {
      for (int j2 = 0; j2 < n2; ++j2) {
        const double a = mag(j1, j2, j3);
        inner = p_inf ? std::max(inner, a) : inner + std::pow(a, spec.p);
      }
    }
    const double slab = p_inf ? inner : std::pow(inner * dh, 1.0 / spec.p);
    outer = q_inf ? std::max(outer, slab) : outer + std::pow(slab, spec.q);
  }
  return q_inf ? outer : std::pow(outer * dv, 1.0 / spec.q);
}

double inner_l2(const VectorField& a, const VectorField& b) {
  require_same_grid(a, b);
  const Grid& g = *a.grid;
  double acc = 0.0;
  g.for_each_spectral([&](std::size_t i, int, int, int j3) {
    double re = 0.0;
    for (int c = 0; c < 3; ++c)
      re += a.comp[c][i].real() * b.comp[c][i].real() +
            a.comp[c][i].imag() * b.comp[c][i].imag();
    acc += g.hermitian_weight(j3) * re;
  });
  return g.volume() * acc;
}

double inner_01(const VectorField& a, const VectorField& b) {
  require_same_grid(a, b);
  const Grid& g = *a.grid;
  double acc = 0.0;
  g.for_each_spectral([&](std::size_t i, int, int, int j3) {
    const double k3 = g.wavenumber(2, j3);
    double re = 0.0;
    for (int c = 0; c < 3; ++c)
      re += a.comp[c][i].real() * b.comp[c][i].real() +
            a.comp[c][i].imag() * b.comp[c][i].imag();
    acc += g.hermitian_weight(j3) * (1.0 + k3 * k3) * re;
  });
  return g.volume() * acc;
}

NormBundle norm_bundle(const VectorField& f) {
  const Grid& g = *f.grid;
  double l2 = 0.0, gradh = 0.0, d3 = 0.0, gd3 = 0.0;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double k3 = g.wavenumber(2, j3);
    const double kh2 = k1 * k1 + k2 * k2;
    double mag2 = 0.0;
    for (int c = 0; c < 3; ++c) mag2 += std::norm(f.comp[c][i]);
    const double w = g.hermitian_weight(j3) * mag2;
    l2 += w;
    gradh += kh2 * w;
    d3 += k3 * k3 * w;
    gd3 += kh2 * k3 * k3 * w;
  });
  const double vol = g.volume();
  NormBundle nb;
  nb.l2 = std::sqrt(vol * l2);
  nb.gradh = std::sqrt(vol * gradh);
  nb.d3 = std::sqrt(vol * d3);
  nb.gradh_d3 = std::sqrt(vol * gd3);
  return nb;
}

double divergence_residual(const VectorField& f) {
  const Grid& g = *f.grid;
  double acc = 0.0;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    const std::complex<double> div =
        std::complex<double>(0.0, g.deriv_wavenumber(0, j1)) * f.comp[0][i] +
        std::complex<double>(0.0, g.deriv_wavenumber(1, j2)) * f.comp[1][i] +
        std::complex<double>(0.0, g.deriv_wavenumber(2, j3)) * f.comp[2][i];
    acc += g.hermitian_weight(j3) * std::norm(div);
  });
  return std::sqrt(g.volume() * acc);
}

double max_relative_divergence(const VectorField& f) {
  const Grid& g = *f.grid;
  double worst = 0.0;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double k3 = g.wavenumber(2, j3);
    double mag2 = 0.0;
    for (int c = 0; c < 3; ++c) mag2 += std::norm(f.comp[c][i]);
    if (mag2 == 0.0) return;
    const std::complex<double> kdotu =
        k1 * f.comp[0][i] + k2 * f.comp[1][i] + k3 * f.comp[2][i];
    const double knorm = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
    if (knorm == 0.0) return;
    worst = std::max(worst, std::abs(kdotu) / (knorm * std::sqrt(mag2)));
  });
  return worst;
}

VectorField random_divfree_field(const GridPtr& grid, double decay_exponent,
                                 double amplitude, std::uint64_t seed,
                                 std::uint64_t stream, const RandomFieldOptions& opts) {
  if (decay_exponent <= 2.5)
    throw std::invalid_argument("decay exponent must exceed 5/2");
  VectorField f = VectorField::zero(grid);
  if (amplitude == 0.0) return f;
  const Grid& g = *grid;
  const CounterRng rng(seed, stream);
  g.for_each_spectral([&](std::size_t idx, int j1, int j2, int j3) {
    const int m1 = g.mode(0, j1), m2 = g.mode(1, j2), m3 = j3;
    if (std::abs(m1) >= g.n1() / 2 || std::abs(m2) >= g.n2() / 2 || m3 >= g.n3() / 2)
      return;  // Nyquist planes stay empty
    if (opts.zero_mean && m1 == 0 && m2 == 0 && m3 == 0) return;
    if (opts.apply_dealias && !g.dealias_keep(m1, m2, m3)) return;
    const double k1 = g.wavenumber(0, j1);
    const double k2 = g.wavenumber(1, j2);
    const double k3 = g.wavenumber(2, j3);
    const double kmag = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
    const double sigma = amplitude * std::pow(1.0 + kmag, -decay_exponent);
    // Key draws by the signed mode triple: resolutions share realizations.
    const std::uint64_t ka =
        (std::uint64_t(std::uint32_t(m1 + (1 << 20))) << 32) | std::uint32_t(m2 + (1 << 20));
    for (int c = 0; c < 3; ++c) {
      const auto zz = rng.gaussian2(ka, (std::uint64_t(m3) << 8) | std::uint64_t(c));
      f.comp[c][idx] = sigma * std::complex<double>(zz[0], zz[1]);
    }
  });
  fft::symmetrize(f);
  return leray_project(f);
}

VectorField apply_dealias_mask(const VectorField& f) {
  VectorField r = f;
  const Grid& g = *f.grid;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    if (!g.dealias_keep(g.mode(0, j1), g.mode(1, j2), j3))
      for (int c = 0; c < 3; ++c) r.comp[c][i] = 0.0;
  });
  return r;
}

VectorField apply_shell_mask(const VectorField& f, long radius2) {
  VectorField r = f;
  const Grid& g = *f.grid;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    const long m1 = g.mode(0, j1), m2 = g.mode(1, j2), m3 = j3;
    if (m1 * m1 + m2 * m2 + m3 * m3 > radius2)
      for (int c = 0; c < 3; ++c) r.comp[c][i] = 0.0;
  });
  return r;
}

VectorField single_mode_field(const GridPtr& grid, const std::array<int, 3>& m,
                              const std::array<double, 3>& dir, double amplitude,
                              double phase) {
  VectorField f = VectorField::zero(grid);
  const Grid& g = *grid;
  for (int d = 0; d < 3; ++d)
    if (std::abs(m[d]) >= g.resolution()[d] / 2)
      throw std::invalid_argument("mode outside the grid band");
  if (m[0] == 0 && m[1] == 0 && m[2] == 0) {
    const double v = amplitude * std::cos(phase);
    for (int c = 0; c < 3; ++c) f.comp[c][0] = dir[c] * v;
    f.divfree = false;
    return f;
  }
  // amplitude*cos(k.x + phase) => uhat(+m) = A/2 e^{i phase}, uhat(-m) conj.
  const std::complex<double> coeff =
      0.5 * amplitude * std::exp(std::complex<double>(0.0, phase));
  int j3 = m[2];
  std::complex<double> stored = coeff;
  int m1 = m[0], m2 = m[1];
  if (m[2] < 0) {  // stored half has m3 >= 0; flip to the conjugate partner
    j3 = -m[2];
    m1 = -m[0];
    m2 = -m[1];
    stored = std::conj(coeff);
  }
  const int j1 = m1 >= 0 ? m1 : m1 + g.n1();
  const int j2 = m2 >= 0 ? m2 : m2 + g.n2();
  for (int c = 0; c < 3; ++c) f.comp[c][g.spectral_index(j1, j2, j3)] = dir[c] * stored;
  if (j3 == 0) {
    // The conjugate partner lives in the stored half as well.
    const int p1 = (g.n1() - j1) % g.n1();
    const int p2 = (g.n2() - j2) % g.n2();
    for (int c = 0; c < 3; ++c)
      f.comp[c][g.spectral_index(p1, p2, 0)] = dir[c] * std::conj(stored);
  }
  f.divfree = false;
  return f;
}

ScalarSamples scalar_cosine(const GridPtr& grid, const std::array<int, 3>& m,
                            double amplitude, double phase) {
  ScalarSamples s = ScalarSamples::zero(grid);
  const Grid& g = *grid;
  const double two_pi = 6.283185307179586476925286766559;
  for (int j1 = 0; j1 < g.n1(); ++j1)
    for (int j2 = 0; j2 < g.n2(); ++j2)
      for (int j3 = 0; j3 < g.n3(); ++j3) {
        const double arg = two_pi * (double(m[0]) * j1 / g.n1() +
                                     double(m[1]) * j2 / g.n2() +
                                     double(m[2]) * j3 / g.n3());
        s.v[g.physical_index(j1, j2, j3)] = amplitude * std::cos(arg + phase);
      }
  return s;
}

}  // namespace anspde
