#pragma once

#include <stdexcept>
#include <vector>

namespace anspde {

/// Piecewise-constant-in-time control with values in the truncated noise
/// coefficient space. Interval j covers [breakpoints[j], breakpoints[j+1]).
struct Control {
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> coefficients;

  void validate() const {
    if (breakpoints.size() < 2 || coefficients.size() + 1 != breakpoints.size())
      throw std::invalid_argument("control needs n+1 breakpoints for n intervals");
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j)
      if (!(breakpoints[j] < breakpoints[j + 1]))
        throw std::invalid_argument("control breakpoints must increase");
    const std::size_t nm = coefficients.front().size();
    for (const auto& c : coefficients)
      if (c.size() != nm)
        throw std::invalid_argument("control intervals must share one mode count");
  }

  std::size_t mode_count() const { return coefficients.empty() ? 0 : coefficients.front().size(); }

  /// phi(t), constant on each interval; clamped to the covered range.
  const std::vector<double>& at(double t) const {
    std::size_t j = 0;
    while (j + 1 < coefficients.size() && t >= breakpoints[j + 1]) ++j;
    return coefficients[j];
  }

  /// (1/2) integral |phi|_0^2 dt.
  double energy() const {
    double e = 0.0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
      double c2 = 0.0;
      for (double c : coefficients[j]) c2 += c * c;
      e += c2 * (breakpoints[j + 1] - breakpoints[j]);
    }
    return 0.5 * e;
  }

  bool in_energy_ball(double m_bound) const { return 2.0 * energy() <= m_bound; }
};

}  // namespace anspde
