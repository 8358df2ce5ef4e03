#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "anspde/nonlinear.hpp"

namespace anspde {

/// Free constants of the nonlinear-term estimates. eps0/eps1 are inputs of
/// the Young splits; c, c_alpha, c_eta and kappa are fitted once against
/// ensemble oracles and then frozen (see fixtures.hpp).
struct InequalityParams {
  double alpha = 1.5;
  double eta = 0.05;
  double c_eta = 1.0;
  double eps0 = 1.0;
  double eps1 = 1.0;
  double c = 1.0;
  double c_alpha = 1.0;
  double kappa = 0.125;
};

/// Pointwise monotonicity defect of the damping nonlinearity:
/// (|y|^{2a} y - |z|^{2a} z).(y-z) - kappa |y-z|^2 (|y|+|z|)^{2a}.
double monotonicity_gap(const std::array<double, 3>& y, const std::array<double, 3>& z,
                        double alpha, double kappa);

/// The scale-invariant quotient whose infimum over pairs is kappa*(alpha).
double monotonicity_ratio(const std::array<double, 3>& y, const std::array<double, 3>& z,
                          double alpha);

/// Brute-force scan for kappa*(alpha) over the reduced (rho, theta)
/// parameterization (|y|=1, |z|=rho<=1, angle theta), with local refinement.
double kappa_star_scan(double alpha, int n_rho = 1000, int n_theta = 1000);

/// |<B(phi,psi), v>| / (||v||_{1,1} |gh phi|^{1/2} |gh psi|^{1/2}
/// |phi|^{1/2} |psi|^{1/2}); nullopt when the denominator degenerates.
std::optional<double> bound_ratio_B(const VectorField& phi, const VectorField& psi,
                                    const VectorField& v);

/// Max over x3-slices and components of ||phi||_{L4_h} /
/// (|gh phi|_{L2_h}^{1/2} |phi|_{L2_h}^{1/2}); near-constant slices skipped.
/// Throws when every slice is degenerate.
double gn_slice_ratio(const VectorField& f);

double d3B_pairing(const VectorField& u);  // <d3 B(u,u), d3 u>
double d3B_bound_rhs(const VectorField& u, const InequalityParams& p);

/// lhs = |integral f g h|; rhs = eps0 |h|^2 + eps1/(4 eps0) | |f|^a g |^2 +
/// c_alpha eps0^{-1} eps1^{-1/(a-1)} |g|^2.
std::pair<double, double> young_triple_bound(const ScalarSamples& f, const ScalarSamples& g,
                                             const ScalarSamples& h, double alpha,
                                             double eps0, double eps1, double c_alpha);

/// lhs = <F(u)-F(v), u-v>; rhs = -eta |gh(u-v)|^2 + c_eta ||v||_{1,1}^2
/// |u-v|^2 - a kappa |(|u|+|v|)^a (u-v)|^2.
std::pair<double, double> F_diff_pairing(const VectorField& u, const VectorField& v,
                                         const DriftParams& dp, const InequalityParams& q);

// Per-sample constant statistics: the sup of each over an ensemble estimates
// the corresponding fitted constant.
std::optional<double> stat_majB(const VectorField& phi, const VectorField& psi,
                                const VectorField& v);
double stat_gn(const VectorField& f);
double stat_d3B(const VectorField& u, double alpha, double eps0, double eps1);
double stat_fgh(const ScalarSamples& f, const ScalarSamples& g, const ScalarSamples& h,
                double alpha, double eps0, double eps1);
double stat_Fdiff(const VectorField& u, const VectorField& v, const DriftParams& dp,
                  double eta, double kappa);

/// One row of the inequality-report CSV.
struct IneqRow {
  std::string lemma_id;
  int sample_id = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;
};

}  // namespace anspde
