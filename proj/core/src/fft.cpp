#include "anspde/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace anspde {
namespace fft {
namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;   // r2c
  fftw_plan bwd = nullptr;   // c2r
};

// FFTW planning is not thread-safe; plan once per resolution under a lock and
// execute with the new-array interface on per-call buffers.
PlanPair plans_for(const std::array<int, 3>& n) {
  static std::map<std::array<int, 3>, PlanPair> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const std::size_t npts = std::size_t(n[0]) * n[1] * n[2];
  const std::size_t nspec = std::size_t(n[0]) * n[1] * (n[2] / 2 + 1);
  double* real_buf = fftw_alloc_real(npts);
  fftw_complex* cplx_buf = fftw_alloc_complex(nspec);
  PlanPair p;
  // FFTW_ESTIMATE keeps plan selection independent of runtime timings so
  // results are bit-reproducible across runs.
  p.fwd = fftw_plan_dft_r2c_3d(n[0], n[1], n[2], real_buf, cplx_buf, FFTW_ESTIMATE);
  p.bwd = fftw_plan_dft_c2r_3d(n[0], n[1], n[2], cplx_buf, real_buf, FFTW_ESTIMATE);
  fftw_free(real_buf);
  fftw_free(cplx_buf);
  if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(n, p);
  return p;
}

struct RealBuf {
  double* p;
  explicit RealBuf(std::size_t n) : p(fftw_alloc_real(n)) {}
  ~RealBuf() { fftw_free(p); }
};
struct CplxBuf {
  fftw_complex* p;
  explicit CplxBuf(std::size_t n) : p(fftw_alloc_complex(n)) {}
  ~CplxBuf() { fftw_free(p); }
};

}  // namespace

std::vector<double> synthesize(const Grid& g, const std::vector<std::complex<double>>& spec) {
  if (spec.size() != g.spectral_size()) throw std::invalid_argument("spectral size mismatch");
  const auto plans = plans_for(g.resolution());
  CplxBuf in(g.spectral_size());
  RealBuf out(g.physical_size());
  std::memcpy(in.p, spec.data(), sizeof(fftw_complex) * g.spectral_size());
  fftw_execute_dft_c2r(plans.bwd, in.p, out.p);
  return std::vector<double>(out.p, out.p + g.physical_size());
}

std::vector<std::complex<double>> analyze(const Grid& g, const std::vector<double>& samples) {
  if (samples.size() != g.physical_size()) throw std::invalid_argument("sample size mismatch");
  const auto plans = plans_for(g.resolution());
  RealBuf in(g.physical_size());
  CplxBuf out(g.spectral_size());
  std::memcpy(in.p, samples.data(), sizeof(double) * g.physical_size());
  fftw_execute_dft_r2c(plans.fwd, in.p, out.p);
  std::vector<std::complex<double>> spec(g.spectral_size());
  const double scale = 1.0 / double(g.physical_size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    spec[i] = std::complex<double>(out.p[i][0] * scale, out.p[i][1] * scale);
  }
  return spec;
}

PhysicalField to_physical(const VectorField& f) {
  PhysicalField p;
  p.grid = f.grid;
  for (int c = 0; c < 3; ++c) p.comp[c] = synthesize(*f.grid, f.comp[c]);
  return p;
}

VectorField to_spectral(const PhysicalField& p) {
  VectorField f;
  f.grid = p.grid;
  for (int c = 0; c < 3; ++c) f.comp[c] = analyze(*p.grid, p.comp[c]);
  f.divfree = false;
  return f;
}

namespace {

// Maps a signed mode to its FFT index on a grid of size n, or -1 when the
// mode does not exist there (or sits on a Nyquist plane, which pad/truncate
// drop by contract).
int index_of_mode(int m, int n) {
  if (std::abs(m) >= n / 2) return -1;
  return m >= 0 ? m : m + n;
}

VectorField resample(const VectorField& f, const GridPtr& target) {
  if (f.grid->box_lengths() != target->box_lengths())
    throw std::invalid_argument("resampling requires identical boxes");
  VectorField r = VectorField::zero(target);
  const Grid& src = *f.grid;
  const Grid& dst = *target;
  src.for_each_spectral([&](std::size_t idx, int j1, int j2, int j3) {
    const int m1 = src.mode(0, j1), m2 = src.mode(1, j2), m3 = j3;
    if (std::abs(m1) >= src.n1() / 2 || std::abs(m2) >= src.n2() / 2 || m3 >= src.n3() / 2)
      return;
    const int t1 = index_of_mode(m1, dst.n1());
    const int t2 = index_of_mode(m2, dst.n2());
    if (t1 < 0 || t2 < 0 || m3 >= dst.n3() / 2) return;
    const std::size_t tidx = dst.spectral_index(t1, t2, m3);
    for (int c = 0; c < 3; ++c) r.comp[c][tidx] = f.comp[c][idx];
  });
  r.divfree = f.divfree;
  return r;
}

}  // namespace

VectorField pad(const VectorField& f, const GridPtr& fine) {
  for (int d = 0; d < 3; ++d)
    if (fine->resolution()[d] < f.grid->resolution()[d])
      throw std::invalid_argument("pad target must be at least as fine");
  return resample(f, fine);
}

VectorField truncate(const VectorField& f, const GridPtr& coarse) {
  for (int d = 0; d < 3; ++d)
    if (coarse->resolution()[d] > f.grid->resolution()[d])
      throw std::invalid_argument("truncate target must be at most as fine");
  return resample(f, coarse);
}

void symmetrize(VectorField& f) {
  const Grid& g = *f.grid;
  const int n1 = g.n1(), n2 = g.n2();
  for (int j3 : {0, g.n3() / 2}) {
    for (int j1 = 0; j1 < n1; ++j1) {
      for (int j2 = 0; j2 < n2; ++j2) {
        const int p1 = (n1 - j1) % n1;
        const int p2 = (n2 - j2) % n2;
        // Visit each conjugate pair once.
        if (std::make_pair(p1, p2) < std::make_pair(j1, j2)) continue;
        const std::size_t ia = g.spectral_index(j1, j2, j3);
        const std::size_t ib = g.spectral_index(p1, p2, j3);
        for (int c = 0; c < 3; ++c) {
          if (ia == ib) {
            f.comp[c][ia] = std::complex<double>(f.comp[c][ia].real(), 0.0);
          } else {
            const auto avg = 0.5 * (f.comp[c][ia] + std::conj(f.comp[c][ib]));
            f.comp[c][ia] = avg;
            f.comp[c][ib] = std::conj(avg);
          }
        }
      }
    }
  }
}

}  // namespace fft
}  // namespace anspde
