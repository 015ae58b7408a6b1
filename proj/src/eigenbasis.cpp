#include "cone/eigenbasis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cone/specfun.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;

void check_same_grid(const SpinorProfile& a, const SpinorProfile& b) {
  if (a.grid != b.grid && !(a.grid && b.grid && a.grid->points() == b.grid->points()))
    throw std::invalid_argument("spinor profiles live on different radial grids");
}

}  // namespace

SpinorProfile::SpinorProfile(int k_, RadialGridPtr g) : k(k_), grid(std::move(g)) {
  upper.assign(grid->size(), cplx{});
  lower.assign(grid->size(), cplx{});
}

SpinorProfile::SpinorProfile(int k_, RadialGridPtr g, std::vector<cplx> u, std::vector<cplx> l)
    : k(k_), grid(std::move(g)), upper(std::move(u)), lower(std::move(l)) {
  if (upper.size() != grid->size() || lower.size() != grid->size())
    throw std::invalid_argument("spinor profile components do not match the grid size");
}

double SpinorProfile::norm() const {
  std::vector<double> g(size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::norm(upper[i]) + std::norm(lower[i]);
  return std::sqrt(std::max(0.0, grid->integrate(g)));
}

SpinorProfile& SpinorProfile::operator+=(const SpinorProfile& o) {
  check_same_grid(*this, o);
  for (std::size_t i = 0; i < size(); ++i) {
    upper[i] += o.upper[i];
    lower[i] += o.lower[i];
  }
  return *this;
}

SpinorProfile& SpinorProfile::operator-=(const SpinorProfile& o) {
  check_same_grid(*this, o);
  for (std::size_t i = 0; i < size(); ++i) {
    upper[i] -= o.upper[i];
    lower[i] -= o.lower[i];
  }
  return *this;
}

SpinorProfile& SpinorProfile::operator*=(cplx c) {
  for (auto& v : upper) v *= c;
  for (auto& v : lower) v *= c;
  return *this;
}

SpinorProfile operator+(SpinorProfile a, const SpinorProfile& b) { return a += b; }
SpinorProfile operator-(SpinorProfile a, const SpinorProfile& b) { return a -= b; }
SpinorProfile operator*(cplx c, SpinorProfile a) { return a *= c; }

cplx inner(const SpinorProfile& a, const SpinorProfile& b) {
  check_same_grid(a, b);
  std::vector<cplx> g(a.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = a.upper[i] * std::conj(b.upper[i]) + a.lower[i] * std::conj(b.lower[i]);
  return a.grid->integrate(g);
}

ModeSpectrum::ModeSpectrum(ConeParams c, RadialGridPtr g, int km) : cone(c), grid(std::move(g)), k_max(km) {
  if (km < 0) throw ValidationError("K_max", "must be non-negative");
}

void ModeSpectrum::set(SpinorProfile p) {
  if (std::abs(p.k) > k_max) {
    std::ostringstream os;
    os << "mode " << p.k << " exceeds K_max = " << k_max;
    throw std::invalid_argument(os.str());
  }
  if (p.grid != grid) throw std::invalid_argument("profile grid differs from the spectrum grid");
  const int k = p.k;
  modes.insert_or_assign(k, std::move(p));
}

const SpinorProfile* ModeSpectrum::find(int k) const {
  auto it = modes.find(k);
  return it == modes.end() ? nullptr : &it->second;
}

double ModeSpectrum::norm() const {
  double s = 0.0;
  for (const auto& [k, p] : modes) {
    const double n = p.norm();
    s += n * n;
  }
  return std::sqrt(s);
}

SpinorField::SpinorField(ConeParams c, RadialGridPtr g, std::size_t m_) : cone(c), grid(std::move(g)), m(m_) {
  values.assign(grid->size() * m, Spinor{});
}

double SpinorField::norm() const {
  const double wt = angles().weight();
  std::vector<double> g(grid->size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += std::norm(at(i, j)[0]) + std::norm(at(i, j)[1]);
    g[i] = wt * s;
  }
  return std::sqrt(std::max(0.0, grid->integrate(g)));
}

AngularEigen angular_eigen(int k, const ConeParams& cone, double theta) {
  const double sigma = cone.sigma();
  const cplx h = std::polar(1.0 / std::sqrt(2.0 * kPi * sigma), -k * theta / sigma);
  return {k / sigma, {h, h}};
}

std::size_t min_angular_nodes(int k_max) { return 4 * static_cast<std::size_t>(k_max) + 1; }

ModeSpectrum decompose(const SpinorField& field, int k_max) {
  if (field.m < min_angular_nodes(k_max)) {
    std::ostringstream os;
    os << "decompose: M = " << field.m << " angular nodes, need at least 4 K_max + 1 = " << min_angular_nodes(k_max);
    throw ResolutionError(os.str());
  }
  const AngularGrid ang = field.angles();
  ModeSpectrum spec(field.cone, field.grid, k_max);
  const std::size_t n = field.grid->size();
  for (int k = -k_max; k <= k_max; ++k) {
    std::vector<cplx> conj_h(field.m);
    for (std::size_t j = 0; j < field.m; ++j)
      conj_h[j] = std::conj(angular_eigen(k, field.cone, ang[j]).harmonic[0]) * ang.weight();
    SpinorProfile p(k, field.grid);
    for (std::size_t i = 0; i < n; ++i) {
      cplx u{}, l{};
      for (std::size_t j = 0; j < field.m; ++j) {
        u += field.at(i, j)[0] * conj_h[j];
        l += field.at(i, j)[1] * conj_h[j];
      }
      p.upper[i] = u;
      p.lower[i] = l;
    }
    spec.set(std::move(p));
  }
  return spec;
}

SpinorField synthesize(const ModeSpectrum& spec, std::size_t m) {
  if (m < min_angular_nodes(spec.k_max)) {
    std::ostringstream os;
    os << "synthesize: M = " << m << " angular nodes, need at least " << min_angular_nodes(spec.k_max);
    throw ResolutionError(os.str());
  }
  SpinorField field(spec.cone, spec.grid, m);
  const AngularGrid ang = field.angles();
  const std::size_t n = spec.grid->size();
  for (const auto& [k, p] : spec.modes) {
    std::vector<cplx> h(m);
    for (std::size_t j = 0; j < m; ++j) h[j] = angular_eigen(k, spec.cone, ang[j]).harmonic[0];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        field.at(i, j)[0] += p.upper[i] * h[j];
        field.at(i, j)[1] += p.lower[i] * h[j];
      }
  }
  return field;
}

ModeSpectrum project(const ModeSpectrum& spec, Projection which) {
  ModeSpectrum out(spec.cone, spec.grid, spec.k_max);
  for (const auto& [k, p] : spec.modes) {
    bool keep = false;
    switch (which) {
      case Projection::P0: keep = k == 0; break;
      case Projection::Pperp: keep = k != 0; break;
      case Projection::Pgt: keep = k > 0; break;
      case Projection::Plt: keep = k < 0; break;
    }
    if (keep) out.set(p);
  }
  return out;
}

std::vector<cplx> apply_dmu(double mu, const RadialGrid& grid, std::span<const cplx> f, Diagnostics* diag) {
  const std::size_t n = grid.size();
  if (f.size() != n) throw std::invalid_argument("apply_dmu: size mismatch with grid");
  const double h = grid.log_step();
  const double c = 1.0 / (12.0 * h);
  std::vector<cplx> d(n);
  d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  d[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
  d[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);

  if (diag) {
    // Compare with the sixth-order stencil as a truncation estimate.
    double err = 0.0, scale = 0.0;
    const double c6 = 1.0 / (60.0 * h);
    for (std::size_t i = 3; i + 3 < n; ++i) {
      const cplx d6 = c6 * (-f[i - 3] + 9.0 * f[i - 2] - 45.0 * f[i - 1] + 45.0 * f[i + 1] - 9.0 * f[i + 2] + f[i + 3]);
      err = std::max(err, std::abs(d6 - d[i]));
      scale = std::max(scale, std::abs(d[i]));
    }
    if (scale > 0.0 && err > 1e-4 * scale) {
      std::ostringstream os;
      os << "apply_dmu: grid too coarse, estimated relative truncation error " << err / scale;
      diag->warn(os.str());
    }
  }

  for (std::size_t i = 0; i < n; ++i) d[i] = (d[i] + mu * f[i]) / grid[i];
  return d;
}

SpinorProfile apply_dk(int k, const ConeParams& cone, const SpinorProfile& p, Diagnostics* diag) {
  const double ks = k / cone.sigma();
  auto up = apply_dmu(0.5 - ks, *p.grid, p.lower, diag);
  auto lo = apply_dmu(0.5 + ks, *p.grid, p.upper, diag);
  for (auto& v : up) v = -v;
  return SpinorProfile(p.k, p.grid, std::move(up), std::move(lo));
}

ModeOrders mode_orders(int k, const ConeParams& cone, const ExtensionParam& gamma) {
  const double ks = k / cone.sigma();
  if (k >= 1) return {ks + 0.5, ks - 0.5, true, 1.0};
  if (k <= -1) return {-(ks + 0.5), -(ks - 0.5), false, 1.0};
  require_admissible(0, gamma, "mode_orders");
  if (gamma.cos_is_zero()) return {0.5, -0.5, true, gamma.sin_gamma()};
  return {-0.5, 0.5, false, gamma.cos_gamma()};
}

Spinor generalized_eigenfunction(int k, const ConeParams& cone, const ExtensionParam& gamma, double rho, double r) {
  if (rho == 0.0) throw DomainError("generalized_eigenfunction: rho must be nonzero");
  if (!(r > 0.0)) throw DomainError("generalized_eigenfunction: r must be positive");
  const ModeOrders o = mode_orders(k, cone, gamma);
  const double x = std::abs(rho) * r;
  const double c = o.sign / std::numbers::sqrt2;
  double lower = c * bessel_j(Order(o.lower), x);
  if (!o.plus) lower = -lower;
  if (rho < 0.0) lower = -lower;
  return {cplx(c * bessel_j(Order(o.upper), x)), cplx(lower)};
}

SpinorProfile generalized_eigenfunction_profile(int k, const ConeParams& cone, const ExtensionParam& gamma, double rho,
                                                RadialGridPtr grid) {
  SpinorProfile p(k, grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const Spinor s = generalized_eigenfunction(k, cone, gamma, rho, (*grid)[i]);
    p.upper[i] = s[0];
    p.lower[i] = s[1];
  }
  return p;
}

}  // namespace cone
