#pragma once

#include <stdexcept>

namespace anspde::fixtures {

// Empirical constants, measured once by `anspde-fixtures` and frozen.
// Monotonicity constants come from the reduced scalar scan (1000x1000 grid
// plus local refinement); the reduced quotient attains its minimum on the
// equal-magnitude ridge, where it equals 2^{-2 alpha} identically.
inline double kappa_star(double alpha) {
  if (alpha == 1.25) return 0.17677669529663681;
  if (alpha == 1.5) return 0.12499999999999994;
  if (alpha == 2.0) return 0.062499999999999972;
  throw std::invalid_argument("no frozen kappa* for this alpha; run the scan");
}

// Ensemble statistics measured at seed 2024, 200 samples, decay 4.0,
// amplitude 1.0, alpha = 1.5, eps0 = eps1 = 1, eta = 0.05, nu = 0.1,
// a = 0.5 (the inequality_suite defaults). Regenerate with
//   anspde-fixtures --samples 200 --resolution 32
// if the ensemble defaults ever change.
inline constexpr double kStat32MajB = 0.0022972876668257594;
inline constexpr double kStat32Gn = 0.63726739156350964;
inline constexpr double kStat32D3B = 0.007625596131550191;
inline constexpr double kStat32Fgh = 0.0058780529886330486;
inline constexpr double kStat32Fdiff = -0.0002307987371974668;

// Verifier constants: the measured maxima with a 1.25x headroom. The
// F-difference statistic is negative on this ensemble class (the dissipative
// terms dominate at every sampled scale), so any positive constant verifies
// the bound; it is floored at 1e-3.
inline constexpr double kMajB = 1.25 * kStat32MajB;
inline constexpr double kGn = 1.25 * kStat32Gn;
inline constexpr double kD3B = 1.25 * kStat32D3B;
inline constexpr double kFghCalpha = 1.25 * kStat32Fgh;
inline constexpr double kCEta = 1e-3;

}  // namespace anspde::fixtures
