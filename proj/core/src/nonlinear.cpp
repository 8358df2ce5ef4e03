#include "anspde/nonlinear.hpp"

#include <cmath>

#include "anspde/fft.hpp"

namespace anspde {

namespace {

GridPtr oversampled_grid(const Grid& g) {
  return Grid::make({2 * g.n1(), 2 * g.n2(), 2 * g.n3()}, g.box_lengths(),
                    g.dealias_fraction());
}

void require_divfree(const VectorField& f, const char* what) {
  if (!f.divfree)
    throw std::invalid_argument(std::string(what) + " requires a divergence-free field");
}

}  // namespace

VectorField convective(const VectorField& u, const VectorField& v) {
  require_same_grid(u, v);
  require_divfree(u, "convective");
  require_divfree(v, "convective");
  const GridPtr grid = u.grid;
  const Grid& g = *grid;

  const VectorField um = apply_dealias_mask(u);
  const VectorField vm = apply_dealias_mask(v);
  const PhysicalField up = fft::to_physical(um);

  // w_l = sum_j u_j d_j v_l, assembled component by component.
  VectorField out = VectorField::zero(grid);
  for (int l = 0; l < 3; ++l) {
    std::vector<double> acc(g.physical_size(), 0.0);
    for (int j = 0; j < 3; ++j) {
      std::vector<std::complex<double>> dv = vm.comp[l];
      g.for_each_spectral([&](std::size_t idx, int j1, int j2, int j3) {
        const int ax = j == 0 ? j1 : (j == 1 ? j2 : j3);
        dv[idx] *= std::complex<double>(0.0, g.deriv_wavenumber(j, ax));
      });
      const std::vector<double> dvp = fft::synthesize(g, dv);
      const std::vector<double>& uj = up.comp[j];
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += uj[i] * dvp[i];
    }
    out.comp[l] = fft::analyze(g, acc);
  }
  out = apply_dealias_mask(out);
  return leray_project(out);
}

double trilinear(const VectorField& u, const VectorField& v, const VectorField& w) {
  require_same_grid(u, w);
  require_divfree(w, "trilinear");
  return inner_l2(convective(u, v), w);
}

DampingResult damping_with_diagnostics(const VectorField& u, double a, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("alpha must exceed 1");
  const GridPtr fine = oversampled_grid(*u.grid);
  const PhysicalField up = fft::to_physical(fft::pad(u, fine));
  const std::size_t n = fine->physical_size();
  const double dv = fine->cell_volume();

  PhysicalField dp = PhysicalField::zero(fine);
  double quad = 0.0, maxabs2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = up.comp[0][i], y = up.comp[1][i], z = up.comp[2][i];
    const double mag2 = x * x + y * y + z * z;
    const double w = mag2 > 0.0 ? std::pow(mag2, alpha) : 0.0;
    dp.comp[0][i] = w * x;
    dp.comp[1][i] = w * y;
    dp.comp[2][i] = w * z;
    quad += w * mag2;
    if (mag2 > maxabs2) maxabs2 = mag2;
  }

  VectorField d = fft::truncate(fft::to_spectral(dp), u.grid);
  d = leray_project(d);
  for (int c = 0; c < 3; ++c)
    for (auto& zc : d.comp[c]) zc *= a;

  DampingResult r;
  r.field = std::move(d);
  r.pairing = a * quad * dv;
  r.l2a2 = std::pow(quad * dv, 1.0 / (2.0 * alpha + 2.0));
  r.max_abs_u = std::sqrt(maxabs2);
  return r;
}

VectorField damping(const VectorField& u, double a, double alpha) {
  return damping_with_diagnostics(u, a, alpha).field;
}

VectorField drift(const VectorField& u, const DriftParams& p) {
  p.validate();
  VectorField f = VectorField::zero(u.grid);
  if (p.viscous) {
    VectorField lap = horizontal_laplacian(u);
    axpy(f, p.nu, lap);
  }
  if (p.convective) axpy(f, -1.0, convective(u, u));
  if (p.damping) axpy(f, -1.0, damping(u, p.a, p.alpha));
  f.divfree = true;
  return f;
}

double weighted_difference_norm2(const VectorField& u, const VectorField& v, double alpha) {
  require_same_grid(u, v);
  const GridPtr fine = oversampled_grid(*u.grid);
  const PhysicalField up = fft::to_physical(fft::pad(u, fine));
  const PhysicalField vp = fft::to_physical(fft::pad(v, fine));
  double acc = 0.0;
  for (std::size_t i = 0; i < fine->physical_size(); ++i) {
    double mu = 0.0, mv = 0.0, d2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      mu += up.comp[c][i] * up.comp[c][i];
      mv += vp.comp[c][i] * vp.comp[c][i];
      const double d = up.comp[c][i] - vp.comp[c][i];
      d2 += d * d;
    }
    const double s = std::sqrt(mu) + std::sqrt(mv);
    acc += std::pow(s, 2.0 * alpha) * d2;
  }
  return acc * fine->cell_volume();
}

VerticalDampingQuadratures vertical_damping_quadratures(const VectorField& u, double alpha) {
  const GridPtr fine = oversampled_grid(*u.grid);
  const VectorField upad = fft::pad(u, fine);
  const PhysicalField up = fft::to_physical(upad);
  const PhysicalField d3p = fft::to_physical(partial_derivative(upad, 3));
  VerticalDampingQuadratures q;
  for (std::size_t i = 0; i < fine->physical_size(); ++i) {
    double mag2 = 0.0, d32 = 0.0, dot = 0.0;
    for (int c = 0; c < 3; ++c) {
      mag2 += up.comp[c][i] * up.comp[c][i];
      d32 += d3p.comp[c][i] * d3p.comp[c][i];
      dot += up.comp[c][i] * d3p.comp[c][i];
    }
    if (mag2 > 0.0) {
      q.mag_d3 += std::pow(mag2, alpha) * d32;
      q.cross_d3 += std::pow(mag2, alpha - 1.0) * dot * dot;
    }
  }
  q.mag_d3 *= fine->cell_volume();
  q.cross_d3 *= fine->cell_volume();
  return q;
}

}  // namespace anspde
