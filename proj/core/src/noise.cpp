#include "anspde/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "anspde/fft.hpp"
#include "anspde/snapshot.hpp"

namespace anspde {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Rep {
  long r2;
  std::array<int, 3> m;
};

// Representative wavevectors of conjugate pairs: m3 > 0, or m3 = 0 with
// (m1, m2) in the upper half plane.
std::vector<Rep> representatives(const Grid& g, std::size_t needed) {
  std::vector<Rep> reps;
  const int b1 = g.n1() / 2 - 1, b2 = g.n2() / 2 - 1, b3 = g.n3() / 2 - 1;
  for (int m1 = -b1; m1 <= b1; ++m1)
    for (int m2 = -b2; m2 <= b2; ++m2)
      for (int m3 = 0; m3 <= b3; ++m3) {
        if (m1 == 0 && m2 == 0 && m3 == 0) continue;
        if (m3 == 0 && (m1 < 0 || (m1 == 0 && m2 < 0))) continue;
        if (!g.dealias_keep(m1, m2, m3)) continue;
        reps.push_back({long(m1) * m1 + long(m2) * m2 + long(m3) * m3, {m1, m2, m3}});
      }
  std::sort(reps.begin(), reps.end(), [](const Rep& a, const Rep& b) {
    return std::tie(a.r2, a.m) < std::tie(b.r2, b.m);
  });
  if (4 * reps.size() < needed)
    throw std::invalid_argument("grid too coarse for the requested noise modes");
  return reps;
}

std::array<double, 3> normalized(std::array<double, 3> v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

ScalarSamples multiplier_shape(const GridPtr& grid, const MultiplierSpec& s) {
  switch (s.kind) {
    case MultiplierSpec::Kind::zero:
      return ScalarSamples::zero(grid);
    case MultiplierSpec::Kind::constant: {
      ScalarSamples f = ScalarSamples::zero(grid);
      std::fill(f.v.begin(), f.v.end(), 1.0);
      return f;
    }
    case MultiplierSpec::Kind::single_mode:
      return scalar_cosine(grid, s.m, 1.0, s.phase);
    case MultiplierSpec::Kind::file: {
      if (!s.samples) throw std::invalid_argument("multiplier file shape not loaded");
      ScalarSamples f;
      f.grid = grid;
      f.v = *s.samples;
      return f;
    }
  }
  throw std::logic_error("unreachable");
}

double shape_sup(const MultiplierSpec& s) {
  if (s.kind == MultiplierSpec::Kind::zero) return 0.0;
  if (s.kind == MultiplierSpec::Kind::file) return s.samples_sup;
  return 1.0;
}

double shape_d3_sup(const Grid& g, const MultiplierSpec& s) {
  if (s.kind == MultiplierSpec::Kind::single_mode)
    return std::abs(kTwoPi * s.m[2] / g.box_lengths()[2]);
  if (s.kind == MultiplierSpec::Kind::file) return s.samples_d3_sup;
  return 0.0;
}

double mode_coeff(const MultiplierSpec& s, int k) {
  return s.active() ? s.value * std::pow(double(k), -s.mode_decay) : 0.0;
}

double additive_coeff(const AdditiveSpec& s, int k) {
  return s.active() ? s.amplitude * std::pow(double(k), -s.mode_decay) : 0.0;
}

// Pointwise saturation used by the general-Lipschitz family.
inline double saturate(double y, double r) { return y / std::sqrt(1.0 + y * y / (r * r)); }

// Shared per-(t,u) products: the spectral images of shape * u (or shape *
// saturate(u)) and shape * d1 u, shape * d2 u. All per-mode responses are
// scalar multiples of these three fields plus the additive part.
struct ResponseParts {
  VectorField from_u;   // valid iff has_u
  VectorField from_d1;  // valid iff has_grad
  VectorField from_d2;
  bool has_u = false;
  bool has_grad = false;
};

ResponseParts response_parts(const NoiseModel& m, const VectorField& u) {
  const DiffusionCoefficient& c = m.coef;
  ResponseParts parts;
  const GridPtr grid = u.grid;
  if (c.sigma1.active()) {
    const ScalarSamples shape = multiplier_shape(grid, c.sigma1);
    PhysicalField up = fft::to_physical(u);
    const bool sat = c.family == DiffusionCoefficient::Family::example2_lipschitz;
    PhysicalField prod = PhysicalField::zero(grid);
    for (int comp = 0; comp < 3; ++comp)
      for (std::size_t i = 0; i < grid->physical_size(); ++i) {
        const double y = up.comp[comp][i];
        prod.comp[comp][i] = shape.v[i] * (sat ? saturate(y, c.example2_saturation) : y);
      }
    parts.from_u = leray_project(fft::to_spectral(prod));
    parts.has_u = true;
  }
  if (c.gradient_terms_enabled && (c.sigma2.active() || c.sigma2t.active())) {
    const ScalarSamples s2 = multiplier_shape(grid, c.sigma2);
    const ScalarSamples s2t = multiplier_shape(grid, c.sigma2t);
    const PhysicalField d1 = fft::to_physical(partial_derivative(u, 1));
    const PhysicalField d2 = fft::to_physical(partial_derivative(u, 2));
    PhysicalField p1 = PhysicalField::zero(grid), p2 = PhysicalField::zero(grid);
    for (int comp = 0; comp < 3; ++comp)
      for (std::size_t i = 0; i < grid->physical_size(); ++i) {
        p1.comp[comp][i] = s2.v[i] * d1.comp[comp][i];
        p2.comp[comp][i] = s2t.v[i] * d2.comp[comp][i];
      }
    parts.from_d1 = leray_project(fft::to_spectral(p1));
    parts.from_d2 = leray_project(fft::to_spectral(p2));
    parts.has_grad = true;
  }
  return parts;
}

double field_norm2(const Grid& g, const VectorField& f, HsSpace space, long shell_radius2) {
  double acc = 0.0;
  g.for_each_spectral([&](std::size_t i, int j1, int j2, int j3) {
    if (shell_radius2 >= 0) {
      const long m1 = g.mode(0, j1), m2 = g.mode(1, j2), m3 = j3;
      if (m1 * m1 + m2 * m2 + m3 * m3 > shell_radius2) return;
    }
    const double k3 = g.wavenumber(2, j3);
    const double w = space == HsSpace::Ltilde ? 1.0 + k3 * k3 : 1.0;
    double mag2 = 0.0;
    for (int c = 0; c < 3; ++c) mag2 += std::norm(f.comp[c][i]);
    acc += g.hermitian_weight(j3) * w * mag2;
  });
  return g.volume() * acc;
}

}  // namespace

void MultiplierSpec::load_shape(const GridPtr& grid) {
  if (kind != Kind::file) return;
  const VectorField snap = read_snapshot(path);
  if (!snap.grid->same_layout(*grid))
    throw std::invalid_argument("multiplier shape grid does not match: " + path);
  auto v = std::make_shared<std::vector<double>>(fft::synthesize(*grid, snap.comp[0]));
  double sup = 0.0;
  for (double x : *v) sup = std::max(sup, std::abs(x));
  std::vector<std::complex<double>> d3 = snap.comp[0];
  grid->for_each_spectral([&](std::size_t i, int, int, int j3) {
    d3[i] *= std::complex<double>(0.0, grid->deriv_wavenumber(2, j3));
  });
  const std::vector<double> d3p = fft::synthesize(*grid, d3);
  double d3sup = 0.0;
  for (double x : d3p) d3sup = std::max(d3sup, std::abs(x));
  samples = std::move(v);
  samples_sup = sup;
  samples_d3_sup = d3sup;
}

void AdditiveSpec::load_shape(const GridPtr& grid) {
  if (kind != Kind::file) return;
  VectorField snap = read_snapshot(path);
  if (!snap.grid->same_layout(*grid))
    throw std::invalid_argument("additive shape grid does not match: " + path);
  field = std::make_shared<VectorField>(leray_project(snap));
}

double TimeModulation::factor(double t) const {
  return 1.0 + amplitude * std::sin(kTwoPi * t / period);
}

double TimeModulation::rate() const {
  return std::abs(amplitude) * kTwoPi / period;
}

void DiffusionCoefficient::validate() const {
  if (!gradient_terms_enabled && (sigma2.active() || sigma2t.active()))
    throw std::invalid_argument(
        "gradient multipliers require gradient_terms_enabled");
  if (!(time_mod.period > 0.0)) throw std::invalid_argument("modulation period must be positive");
  if (!(example2_saturation > 0.0))
    throw std::invalid_argument("saturation scale must be positive");
}

NoiseBasis NoiseBasis::make_fourier(const GridPtr& grid, int n_w, double q0, double r) {
  if (n_w <= 0) throw std::invalid_argument("need at least one noise mode");
  if (!(q0 > 0.0) || !(r > 1.0))
    throw std::invalid_argument("need q0 > 0 and spectral decay r > 1");
  NoiseBasis basis;
  basis.grid = grid;
  const auto reps = representatives(*grid, std::size_t(n_w));
  const double vol = grid->volume();
  for (const Rep& rep : reps) {
    if (basis.size() >= n_w) break;
    const std::array<double, 3> kv = {kTwoPi * rep.m[0] / grid->box_lengths()[0],
                                      kTwoPi * rep.m[1] / grid->box_lengths()[1],
                                      kTwoPi * rep.m[2] / grid->box_lengths()[2]};
    const std::array<double, 3> helper =
        (rep.m[0] == 0 && rep.m[1] == 0) ? std::array<double, 3>{1.0, 0.0, 0.0}
                                         : std::array<double, 3>{0.0, 0.0, 1.0};
    const std::array<double, 3> e1 = normalized(cross(kv, helper));
    const std::array<double, 3> e2 = normalized(cross(kv, e1));
    const double k3 = kv[2];
    const double scale = std::sqrt(2.0 / ((1.0 + k3 * k3) * vol));
    const double half_pi = 1.5707963267948966192;
    for (const auto& dir : {e1, e2}) {
      for (double phase : {0.0, -half_pi}) {  // cos, then sin
        if (basis.size() >= n_w) break;
        std::array<double, 3> d = {dir[0] * scale, dir[1] * scale, dir[2] * scale};
        VectorField psi = single_mode_field(grid, rep.m, d, 1.0, phase);
        psi.divfree = true;  // dir is orthogonal to k by construction
        basis.modes.push_back(std::move(psi));
      }
    }
  }
  basis.q.resize(std::size_t(n_w));
  for (int k = 0; k < n_w; ++k) basis.q[std::size_t(k)] = q0 * std::pow(double(k + 1), -r);
  return basis;
}

std::vector<double> sample_increment(const NoiseBasis& basis, double dt,
                                     const CounterRng& rng, std::uint64_t step) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  std::vector<double> xi(std::size_t(basis.size()));
  const double s = std::sqrt(dt);
  for (std::size_t k = 0; k < xi.size(); ++k)
    xi[k] = s * rng.gaussian(step, 0x6e6f6973ull + k);
  return xi;
}

VectorField noise_field(const NoiseBasis& basis, const std::vector<double>& xi) {
  if (int(xi.size()) != basis.size())
    throw std::invalid_argument("coefficient count does not match the basis");
  VectorField f = VectorField::zero(basis.grid);
  for (std::size_t k = 0; k < xi.size(); ++k)
    axpy(f, std::sqrt(basis.q[k]) * xi[k], basis.modes[k]);
  f.divfree = true;
  return f;
}

VectorField apply_sigma(double t, const VectorField& u, const std::vector<double>& xi,
                        const NoiseModel& m, int cutoff) {
  m.coef.validate();
  if (int(xi.size()) != m.basis.size())
    throw std::invalid_argument("coefficient count does not match the basis");
  if (!u.grid->same_layout(*m.basis.grid))
    throw std::invalid_argument("field grid does not match the noise basis");
  const int nk = cutoff < 0 ? m.basis.size() : std::min(cutoff, m.basis.size());
  const double theta = m.coef.time_mod.factor(t);

  const VectorField* file_shape =
      m.coef.sigma0.kind == AdditiveSpec::Kind::file ? m.coef.sigma0.field.get() : nullptr;
  if (m.coef.sigma0.kind == AdditiveSpec::Kind::file && !file_shape)
    throw std::invalid_argument("additive shape not loaded");
  VectorField out = VectorField::zero(u.grid);
  double w_u = 0.0, w_d1 = 0.0, w_d2 = 0.0;
  for (int k = 0; k < nk; ++k) {
    const double amp = additive_coeff(m.coef.sigma0, k + 1);
    if (amp != 0.0)
      axpy(out, theta * xi[std::size_t(k)] * amp,
           file_shape ? *file_shape : m.basis.modes[std::size_t(k)]);
    w_u += xi[std::size_t(k)] * mode_coeff(m.coef.sigma1, k + 1);
    w_d1 += xi[std::size_t(k)] * mode_coeff(m.coef.sigma2, k + 1);
    w_d2 += xi[std::size_t(k)] * mode_coeff(m.coef.sigma2t, k + 1);
  }
  if (w_u != 0.0 || w_d1 != 0.0 || w_d2 != 0.0) {
    const ResponseParts parts = response_parts(m, u);
    if (parts.has_u && w_u != 0.0) axpy(out, theta * w_u, parts.from_u);
    if (parts.has_grad) {
      if (w_d1 != 0.0) axpy(out, theta * w_d1, parts.from_d1);
      if (w_d2 != 0.0) axpy(out, theta * w_d2, parts.from_d2);
    }
  }
  out.divfree = true;
  return out;
}

double hs_norm2(const NoiseModel& m, double t, const VectorField& u, HsSpace space,
                int cutoff, long shell_radius2) {
  m.coef.validate();
  const int nk = cutoff < 0 ? m.basis.size() : std::min(cutoff, m.basis.size());
  const double theta = m.coef.time_mod.factor(t);
  const bool needs_parts = m.coef.sigma1.active() ||
                           (m.coef.gradient_terms_enabled &&
                            (m.coef.sigma2.active() || m.coef.sigma2t.active()));
  ResponseParts parts;
  if (needs_parts) parts = response_parts(m, u);

  const Grid& g = *m.basis.grid;
  double acc = 0.0;
  for (int k = 0; k < nk; ++k) {
    const double amp = additive_coeff(m.coef.sigma0, k + 1);
    const double c1 = mode_coeff(m.coef.sigma1, k + 1);
    const double c2 = mode_coeff(m.coef.sigma2, k + 1);
    const double c2t = mode_coeff(m.coef.sigma2t, k + 1);
    if (amp == 0.0 && c1 == 0.0 && c2 == 0.0 && c2t == 0.0) continue;
    VectorField resp = VectorField::zero(m.basis.grid);
    if (amp != 0.0)
      axpy(resp, amp,
           m.coef.sigma0.kind == AdditiveSpec::Kind::file ? *m.coef.sigma0.field
                                                          : m.basis.modes[std::size_t(k)]);
    if (parts.has_u && c1 != 0.0) axpy(resp, c1, parts.from_u);
    if (parts.has_grad) {
      if (c2 != 0.0) axpy(resp, c2, parts.from_d1);
      if (c2t != 0.0) axpy(resp, c2t, parts.from_d2);
    }
    acc += field_norm2(g, resp, space, shell_radius2);
  }
  return theta * theta * acc;
}

double hs_norm(const NoiseModel& m, double t, const VectorField& u, HsSpace space,
               int cutoff, long shell_radius2) {
  return std::sqrt(hs_norm2(m, t, u, space, cutoff, shell_radius2));
}

double hs_diff_norm2(const NoiseModel& m, double t, const VectorField& u,
                     const VectorField& v, HsSpace space) {
  // The additive part cancels in sigma(t,u) - sigma(t,v); reuse the affine
  // machinery on the difference responses.
  const double theta = m.coef.time_mod.factor(t);
  const ResponseParts pu = response_parts(m, u);
  const ResponseParts pv = response_parts(m, v);
  const Grid& g = *m.basis.grid;
  double acc = 0.0;
  for (int k = 0; k < m.basis.size(); ++k) {
    const double c1 = mode_coeff(m.coef.sigma1, k + 1);
    const double c2 = mode_coeff(m.coef.sigma2, k + 1);
    const double c2t = mode_coeff(m.coef.sigma2t, k + 1);
    if (c1 == 0.0 && c2 == 0.0 && c2t == 0.0) continue;
    VectorField diff = VectorField::zero(m.basis.grid);
    if (pu.has_u && c1 != 0.0) {
      axpy(diff, c1, pu.from_u);
      axpy(diff, -c1, pv.from_u);
    }
    if (pu.has_grad) {
      if (c2 != 0.0) {
        axpy(diff, c2, pu.from_d1);
        axpy(diff, -c2, pv.from_d1);
      }
      if (c2t != 0.0) {
        axpy(diff, c2t, pu.from_d2);
        axpy(diff, -c2t, pv.from_d2);
      }
    }
    acc += field_norm2(g, diff, space, -1);
  }
  return theta * theta * acc;
}

double hs_time_diff_norm2(const NoiseModel& m, double t1, double t2, const VectorField& u) {
  const double th1 = m.coef.time_mod.factor(t1);
  const double th2 = m.coef.time_mod.factor(t2);
  const double base = hs_norm2(m, 0.0, u, HsSpace::L) /
                      (m.coef.time_mod.factor(0.0) * m.coef.time_mod.factor(0.0));
  return (th1 - th2) * (th1 - th2) * base;
}

ConditionConstants constants_from_example1(const NoiseModel& m) {
  const DiffusionCoefficient& c = m.coef;
  if (c.family != DiffusionCoefficient::Family::example1)
    throw std::invalid_argument("closed-form constants exist for the affine family only");
  c.validate();
  const Grid& g = *m.basis.grid;
  const double th2 = c.time_mod.sup() * c.time_mod.sup();

  double sum0_l2 = 0.0, sum0_01 = 0.0;
  double sum1 = 0.0, sum1_d3 = 0.0;
  double sum2 = 0.0, sum2_d3 = 0.0;
  const double s1_sup = shape_sup(c.sigma1), s1_d3 = shape_d3_sup(g, c.sigma1);
  const double s2_sup = shape_sup(c.sigma2), s2_d3 = shape_d3_sup(g, c.sigma2);
  const double s2t_sup = shape_sup(c.sigma2t), s2t_d3 = shape_d3_sup(g, c.sigma2t);
  for (int k = 1; k <= m.basis.size(); ++k) {
    const double amp = additive_coeff(c.sigma0, k);
    if (amp != 0.0) {
      const VectorField& shape = c.sigma0.kind == AdditiveSpec::Kind::file
                                     ? *c.sigma0.field
                                     : m.basis.modes[std::size_t(k - 1)];
      sum0_l2 += amp * amp * inner_l2(shape, shape);
      sum0_01 += amp * amp * inner_01(shape, shape);
    }
    const double c1 = mode_coeff(c.sigma1, k);
    sum1 += c1 * c1 * s1_sup * s1_sup;
    sum1_d3 += c1 * c1 * (s1_sup * s1_sup + s1_d3 * s1_d3);
    const double c2 = mode_coeff(c.sigma2, k);
    const double c2t = mode_coeff(c.sigma2t, k);
    sum2 += c2 * c2 * s2_sup * s2_sup + c2t * c2t * s2t_sup * s2t_sup;
    sum2_d3 += c2 * c2 * (s2_sup * s2_sup + s2_d3 * s2_d3) +
               c2t * c2t * (s2t_sup * s2t_sup + s2t_d3 * s2t_d3);
  }

  ConditionConstants cc;
  cc.K0 = 3.0 * th2 * sum0_l2;
  cc.K1 = 3.0 * th2 * sum1;
  cc.K2 = 3.0 * th2 * sum2;
  cc.Kt0 = 5.0 * th2 * sum0_01;
  cc.Kt1 = cc.K1 + 5.0 * th2 * sum1_d3;
  cc.Kt2 = cc.K2 + 5.0 * th2 * sum2_d3;
  cc.L1 = 2.0 / 3.0 * cc.K1;
  cc.L2 = 2.0 / 3.0 * cc.K2;
  cc.gamma = 1.0;
  const double base = std::max(std::sqrt(cc.K0), std::sqrt(cc.K1)) / c.time_mod.sup();
  cc.holder_C = c.time_mod.rate() * base;
  return cc;
}

AuditReport audit_condition(const NoiseModel& m, const ConditionConstants& c,
                            const std::vector<double>& times,
                            const std::vector<VectorField>& us,
                            const std::vector<VectorField>& vs, double nu) {
  if (times.size() != us.size() || us.size() != vs.size() || us.empty())
    throw std::invalid_argument("audit needs a nonempty matched (t,u,v) ensemble");
  AuditReport rep;
  rep.margin_growth_L = rep.margin_growth_Lt = rep.margin_lipschitz = rep.margin_holder =
      std::numeric_limits<double>::infinity();
  const double tol = 1e-9;

  for (std::size_t i = 0; i < us.size(); ++i) {
    const double t = times[i];
    const VectorField& u = us[i];
    const NormBundle nu_b = norm_bundle(u);

    const double lhsL = hs_norm2(m, t, u, HsSpace::L);
    const double rhsL = c.K0 + c.K1 * nu_b.l2 * nu_b.l2 + c.K2 * nu_b.gradh * nu_b.gradh;
    rep.margin_growth_L = std::min(rep.margin_growth_L, rhsL - lhsL);
    if (lhsL > rhsL * (1.0 + tol) + tol)
      rep.violations.push_back({"growth_L", int(i), lhsL, rhsL});

    const double lhsLt = hs_norm2(m, t, u, HsSpace::Ltilde);
    const double h01 = nu_b.h01();
    const double rhsLt = c.Kt0 + c.Kt1 * h01 * h01 +
                         c.Kt2 * (nu_b.gradh * nu_b.gradh + nu_b.gradh_d3 * nu_b.gradh_d3);
    rep.margin_growth_Lt = std::min(rep.margin_growth_Lt, rhsLt - lhsLt);
    if (lhsLt > rhsLt * (1.0 + tol) + tol)
      rep.violations.push_back({"growth_Ltilde", int(i), lhsLt, rhsLt});

    const VectorField& v = vs[i];
    const NormBundle nd = norm_bundle(u - v);
    const double lhsLip = hs_diff_norm2(m, t, u, v, HsSpace::L);
    const double rhsLip = c.L1 * nd.l2 * nd.l2 + c.L2 * nd.gradh * nd.gradh;
    rep.margin_lipschitz = std::min(rep.margin_lipschitz, rhsLip - lhsLip);
    if (lhsLip > rhsLip * (1.0 + tol) + tol)
      rep.violations.push_back({"lipschitz", int(i), lhsLip, rhsLip});

    const double t2 = times[(i + 1) % times.size()] + 0.25 * (i + 1) / double(us.size());
    const double lhsH = std::sqrt(hs_time_diff_norm2(m, t, t2, u));
    const double rhsH =
        c.holder_C * (1.0 + nu_b.h10()) * std::pow(std::abs(t - t2), c.gamma);
    rep.margin_holder = std::min(rep.margin_holder, rhsH - lhsH);
    if (lhsH > rhsH * (1.0 + tol) + tol)
      rep.violations.push_back({"time_holder", int(i), lhsH, rhsH});
  }

  rep.k2_threshold_ok = c.Kt2 < 2.0 * nu / 21.0;
  if (!rep.k2_threshold_ok)
    rep.violations.push_back({"Kt2_threshold", -1, c.Kt2, 2.0 * nu / 21.0});
  rep.passed = rep.violations.empty();
  return rep;
}

}  // namespace anspde
