#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace anspde {

/// Periodic box discretization. Spectral data lives on the half-spectrum
/// (real-to-complex layout): integer modes m1, m2 run over -N/2 < m <= N/2
/// and m3 over 0..N3/2, the conjugate half being implicit.
class Grid {
 public:
  static std::shared_ptr<const Grid> make(std::array<int, 3> resolution,
                                          std::array<double, 3> box_lengths,
                                          double dealias_fraction = 2.0 / 3.0) {
    for (int d = 0; d < 3; ++d) {
      if (resolution[d] <= 0 || resolution[d] % 2 != 0)
        throw std::invalid_argument("grid resolution must be even and positive");
      if (!(box_lengths[d] > 0.0))
        throw std::invalid_argument("box lengths must be positive");
    }
    if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
      throw std::invalid_argument("dealias fraction must lie in (0,1]");
    return std::shared_ptr<const Grid>(new Grid(resolution, box_lengths, dealias_fraction));
  }

  /// Cube with side 2*pi, the default working box.
  static std::shared_ptr<const Grid> make_cubic(int n, double dealias_fraction = 2.0 / 3.0) {
    const double two_pi = 6.283185307179586476925286766559;
    return make({n, n, n}, {two_pi, two_pi, two_pi}, dealias_fraction);
  }

  const std::array<int, 3>& resolution() const { return n_; }
  const std::array<double, 3>& box_lengths() const { return len_; }
  double dealias_fraction() const { return dealias_; }

  int n1() const { return n_[0]; }
  int n2() const { return n_[1]; }
  int n3() const { return n_[2]; }
  int n3_half() const { return n_[2] / 2 + 1; }

  std::size_t spectral_size() const {
    return std::size_t(n_[0]) * n_[1] * n3_half();
  }
  std::size_t physical_size() const {
    return std::size_t(n_[0]) * n_[1] * n_[2];
  }
  double volume() const { return len_[0] * len_[1] * len_[2]; }
  double cell_volume() const { return volume() / double(physical_size()); }

  /// Signed integer mode along axis d for FFT index j.
  int mode(int d, int j) const { return j <= n_[d] / 2 ? j : j - n_[d]; }

  double wavenumber(int d, int j) const { return mode_k_[d][std::size_t(j)]; }

  /// Spectral multiplier for a partial derivative; zero on the Nyquist plane.
  double deriv_wavenumber(int d, int j) const {
    return mode(d, j) == n_[d] / 2 ? 0.0 : mode_k_[d][std::size_t(j)];
  }

  std::size_t spectral_index(int j1, int j2, int j3) const {
    return (std::size_t(j1) * n_[1] + j2) * n3_half() + j3;
  }
  std::size_t physical_index(int j1, int j2, int j3) const {
    return (std::size_t(j1) * n_[1] + j2) * n_[2] + j3;
  }

  /// Parseval weight for the stored half-spectrum: interior m3 entries stand
  /// for themselves plus the implicit conjugate partner.
  double hermitian_weight(int j3) const {
    return (j3 == 0 || j3 == n_[2] / 2) ? 1.0 : 2.0;
  }

  bool dealias_keep(int m1, int m2, int m3) const {
    return std::abs(m1) <= dealias_ * n_[0] / 2.0 &&
           std::abs(m2) <= dealias_ * n_[1] / 2.0 &&
           std::abs(m3) <= dealias_ * n_[2] / 2.0;
  }

  bool same_layout(const Grid& other) const {
    return n_ == other.n_ && len_ == other.len_;
  }

  /// Iterates the stored half-spectrum: fn(index, j1, j2, j3).
  template <typename Fn>
  void for_each_spectral(Fn&& fn) const {
    std::size_t idx = 0;
    for (int j1 = 0; j1 < n_[0]; ++j1)
      for (int j2 = 0; j2 < n_[1]; ++j2)
        for (int j3 = 0; j3 < n3_half(); ++j3, ++idx) fn(idx, j1, j2, j3);
  }

  /// Squared radius of the n-th nonzero integer-lattice shell; shell(0) = 0
  /// keeps only the mean mode.
  static long shell_radius2(int n) {
    if (n <= 0) return 0;
    // |m|^2 realizes every nonnegative integer except 4^a(8b+7).
    std::vector<long> vals;
    for (long v = 1; int(vals.size()) < n; ++v) {
      long w = v;
      while (w % 4 == 0) w /= 4;
      if (w % 8 != 7) vals.push_back(v);
    }
    return vals.back();
  }

 private:
  Grid(std::array<int, 3> n, std::array<double, 3> len, double dealias)
      : n_(n), len_(len), dealias_(dealias) {
    const double two_pi = 6.283185307179586476925286766559;
    for (int d = 0; d < 3; ++d) {
      mode_k_[d].resize(std::size_t(n_[d]));
      for (int j = 0; j < n_[d]; ++j)
        mode_k_[d][std::size_t(j)] = two_pi * mode(d, j) / len_[d];
    }
  }

  std::array<int, 3> n_;
  std::array<double, 3> len_;
  double dealias_;
  std::array<std::vector<double>, 3> mode_k_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace anspde
