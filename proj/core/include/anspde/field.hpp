#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "anspde/grid.hpp"

namespace anspde {

/// Divergence-free-capable 3-component velocity field stored as half-spectrum
/// coefficients u(x) = sum_k uhat(k) exp(i k.x). Operations treat fields as
/// immutable values and return new ones.
struct VectorField {
  GridPtr grid;
  std::array<std::vector<std::complex<double>>, 3> comp;
  bool divfree = false;

  static VectorField zero(GridPtr g) {
    VectorField f;
    f.grid = std::move(g);
    for (auto& c : f.comp) c.assign(f.grid->spectral_size(), {0.0, 0.0});
    f.divfree = true;
    return f;
  }

  std::size_t size() const { return grid->spectral_size(); }
};

/// Physical-space samples of a vector field on the grid's collocation points.
struct PhysicalField {
  GridPtr grid;
  std::array<std::vector<double>, 3> comp;

  static PhysicalField zero(GridPtr g) {
    PhysicalField f;
    f.grid = std::move(g);
    for (auto& c : f.comp) c.assign(f.grid->physical_size(), 0.0);
    return f;
  }
};

/// Scalar samples on the collocation grid (test functions, multipliers).
struct ScalarSamples {
  GridPtr grid;
  std::vector<double> v;

  static ScalarSamples zero(GridPtr g) {
    ScalarSamples s;
    s.grid = std::move(g);
    s.v.assign(s.grid->physical_size(), 0.0);
    return s;
  }
};

inline void require_same_grid(const VectorField& a, const VectorField& b) {
  if (!a.grid || !b.grid || !a.grid->same_layout(*b.grid))
    throw std::invalid_argument("fields live on different grids");
}

inline VectorField operator+(const VectorField& a, const VectorField& b) {
  require_same_grid(a, b);
  VectorField r = a;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < r.comp[c].size(); ++i) r.comp[c][i] += b.comp[c][i];
  r.divfree = a.divfree && b.divfree;
  return r;
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
  require_same_grid(a, b);
  VectorField r = a;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < r.comp[c].size(); ++i) r.comp[c][i] -= b.comp[c][i];
  r.divfree = a.divfree && b.divfree;
  return r;
}

inline VectorField operator*(double s, const VectorField& a) {
  VectorField r = a;
  for (int c = 0; c < 3; ++c)
    for (auto& z : r.comp[c]) z *= s;
  return r;
}

inline void axpy(VectorField& y, double a, const VectorField& x) {
  require_same_grid(y, x);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < y.comp[c].size(); ++i) y.comp[c][i] += a * x.comp[c][i];
  y.divfree = y.divfree && x.divfree;
}

}  // namespace anspde
