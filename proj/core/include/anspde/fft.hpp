#pragma once

#include <complex>
#include <vector>

#include "anspde/field.hpp"
#include "anspde/grid.hpp"

namespace anspde {

/// FFT transforms between the half-spectrum and collocation samples.
/// Plans are cached per grid resolution; execution is thread-safe.
namespace fft {

/// Inverse transform of one component (unnormalized synthesis, matching the
/// convention u(x) = sum_k uhat(k) exp(i k.x)).
std::vector<double> synthesize(const Grid& g, const std::vector<std::complex<double>>& spec);

/// Forward transform of samples, normalized by 1/Npts.
std::vector<std::complex<double>> analyze(const Grid& g, const std::vector<double>& samples);

PhysicalField to_physical(const VectorField& f);
VectorField to_spectral(const PhysicalField& p);

/// Embeds f into a finer grid (same box, larger resolution). Nyquist planes
/// of the source are dropped; the library's field constructors never fill
/// them.
VectorField pad(const VectorField& f, const GridPtr& fine);

/// Restricts f to a coarser grid (same box, smaller resolution).
VectorField truncate(const VectorField& f, const GridPtr& coarse);

/// Restores exact Hermitian symmetry on the self-conjugate planes m3 = 0 and
/// m3 = N3/2 after direct spectral construction.
void symmetrize(VectorField& f);

}  // namespace fft
}  // namespace anspde
