#include "cone/propagator.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cone/specfun.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kPanelWarn = 1u << 20;

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Trapezoid weights in ln s plus the segment (0, s_1) for an integrand ~ s^{2 nu + 1}.
std::vector<double> kernel_weights(double nu, const RadialGrid& g) {
  std::vector<double> w = g.weights();
  w[0] += g.min() * g.min() / (2.0 * nu + 2.0);
  return w;
}

std::vector<cplx> band_diagonal(const DyadicBand& band, double t, const QuadratureRule& q) {
  std::vector<cplx> d(q.nodes.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double rho = q.nodes[i];
    d[i] = std::polar(q.weights[i] * band(rho) * rho, -t * rho);
  }
  return d;
}

// Factored K p for one component: sum_q J(rho_q r_a) d_q sum_b J(rho_q s_b) w_b p_b.
std::vector<cplx> apply_factored(double nu, const RadialGrid& g, const QuadratureRule& q, std::span<const cplx> d,
                                 std::span<const cplx> p) {
  const auto w = kernel_weights(nu, g);
  std::vector<cplx> x(p.size()), y(q.nodes.size()), out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) x[i] = p[i] * w[i];
  const BesselJ j{Order(nu)};
  kernels::bessel_apply(j, q.nodes, g.points(), x, y);
  for (std::size_t a = 0; a < y.size(); ++a) y[a] *= d[a];
  kernels::bessel_apply(j, g.points(), q.nodes, y, out);
  return out;
}

void check_time(double t, const char* where) {
  if (!std::isfinite(t)) throw DomainError(std::string(where) + ": t must be finite");
}

}  // namespace

double DyadicBand::scale() const { return std::ldexp(1.0, j_); }

double DyadicBand::step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double DyadicBand::phi(double lambda) {
  lambda = std::abs(lambda);
  if (lambda == 0.0) return 0.0;
  const double x = std::log2(lambda);
  return step(x + 1.0) - step(x);
}

double DyadicBand::phi_tilde(double lambda) { return phi(2.0 * lambda) + phi(lambda) + phi(0.5 * lambda); }

double DyadicBand::operator()(double lambda) const { return phi(std::ldexp(lambda, -j_)); }
double DyadicBand::enlarged(double lambda) const { return phi_tilde(std::ldexp(lambda, -j_)); }

QuadratureRule band_rule(const DyadicBand& band, double t, double r_max, double s_max) {
  // Panels on the scaled band [1/2, 2], rate 2^j (|t| + r + s) per unit of lambda.
  const double rate = band.scale() * (std::abs(t) + r_max + s_max) + 1.0;
  const auto panels = static_cast<std::size_t>(std::max(64.0, std::ceil(1.5 * 4.0 * rate / kPi)));
  QuadratureRule q = gauss_legendre_panels(0.5, 2.0, panels);
  const double sc = band.scale();
  for (auto& x : q.nodes) x *= sc;
  for (auto& w : q.weights) w *= sc;
  return q;
}

cplx m_nu_localized(Order nu, const DyadicBand& band, double t, double r, double s, Diagnostics* diag) {
  check_time(t, "m_nu_localized");
  if (!(r > 0.0) || !(s > 0.0)) throw DomainError("m_nu_localized: r and s must be positive");
  const QuadratureRule q = band_rule(band, t, r, s);
  if (q.nodes.size() / 8 > kPanelWarn) {
    std::ostringstream os;
    os << "m_nu_localized: " << q.nodes.size() / 8 << " panels needed for t = " << t << ", r = " << r << ", s = " << s;
    warn(diag, os.str());
  }
  const BesselJ j(nu);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double rho = q.nodes[i];
    const double a = q.weights[i] * band(rho) * rho * (j(r * rho) * j(s * rho));
    re += a * std::cos(t * rho);
    im -= a * std::sin(t * rho);
  }
  return {re, im};
}

KernelOrders kernel_orders(int k, const ConeParams& cone, const ExtensionParam& gamma) {
  if (k == 0) require_admissible(0, gamma, "kernel_orders");
  const ModeOrders o = mode_orders(k, cone, gamma);
  return {o.upper, o.lower};
}

KernelMatrix mode_kernel(int k, const ConeParams& cone, const ExtensionParam& gamma, const DyadicBand& band, double t,
                         std::span<const double> points) {
  check_time(t, "mode_kernel");
  KernelMatrix km;
  km.t = t;
  km.k = k;
  km.j = band.j();
  km.orders = kernel_orders(k, cone, gamma);
  km.points.assign(points.begin(), points.end());
  const std::size_t n = points.size();
  const double rmax = max_abs(points);
  const QuadratureRule q = band_rule(band, t, rmax, rmax);
  const auto d = band_diagonal(band, t, q);
  std::vector<double> at(n * q.nodes.size());
  for (auto [nu, out] : {std::pair{km.orders.upper, &km.upper}, std::pair{km.orders.lower, &km.lower}}) {
    kernels::bessel_matrix(BesselJ(Order(nu)), points, q.nodes, at);
    out->assign(n * n, cplx{});
    kernels::weighted_gram(at, n, d, *out);
  }
  return km;
}

SpinorProfile apply_kernel_matrix(const KernelMatrix& kmat, const SpinorProfile& p) {
  const std::size_t n = kmat.size();
  if (p.size() != n || p.grid->points() != kmat.points)
    throw std::invalid_argument("apply_kernel_matrix: kernel nodes differ from the profile grid");
  SpinorProfile out(p.k, p.grid);
  auto apply = [&](double nu, const std::vector<cplx>& m, const std::vector<cplx>& f, std::vector<cplx>& y) {
    const auto w = kernel_weights(nu, *p.grid);
    for (std::size_t a = 0; a < n; ++a) {
      cplx s{};
      for (std::size_t b = 0; b < n; ++b) s += m[a * n + b] * (w[b] * f[b]);
      y[a] = s;
    }
  };
  apply(kmat.orders.upper, kmat.upper, p.upper, out.upper);
  apply(kmat.orders.lower, kmat.lower, p.lower, out.lower);
  return out;
}

SpinorProfile apply_localized_kernel(const DyadicBand& band, int k, const ConeParams& cone, const ExtensionParam& gamma,
                                     double t, const SpinorProfile& p) {
  check_time(t, "apply_localized_kernel");
  const KernelOrders o = kernel_orders(k, cone, gamma);
  const double rmax = p.grid->max();
  const QuadratureRule q = band_rule(band, t, rmax, rmax);
  const auto d = band_diagonal(band, t, q);
  return SpinorProfile(p.k, p.grid, apply_factored(o.upper, *p.grid, q, d, p.upper),
                       apply_factored(o.lower, *p.grid, q, d, p.lower));
}

SpinorProfile scalar_multiplier(int k, const ConeParams& cone, const ExtensionParam& gamma, const SpinorProfile& p,
                                const std::function<cplx(double)>& m, const SpectralGridPtr& rho) {
  const KernelOrders o = kernel_orders(k, cone, gamma);
  auto one = [&](double nu, const std::vector<cplx>& f) {
    auto F = hankel_forward(Order(nu), p.grid, f, rho);
    for (std::size_t a = 0; a < F.size(); ++a) F[a] *= m((*rho)[a]);
    return hankel_inverse(Order(nu), rho, F, p.grid);
  };
  return SpinorProfile(p.k, p.grid, one(o.upper, p.upper), one(o.lower, p.lower));
}

ModeSpectrum spectral_multiplier(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma,
                                 const std::function<cplx(double)>& m, const SpectralGridPtr& rho, Diagnostics* diag) {
  ModeSpectrum out(spec.cone, spec.grid, spec.k_max);
  for (const auto& [k, p] : spec.modes) {
    EnergyDensity v = relativistic_forward(k, cone, gamma, p, rho, diag);
    for (std::size_t a = 0; a < v.pos.size(); ++a) {
      const double x = (*rho)[a];
      v.pos[a] *= m(x);
      v.neg[a] *= m(-x);
    }
    out.set(relativistic_inverse(k, cone, gamma, v, spec.grid, diag));
  }
  return out;
}

ModeSpectrum evolve(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma, double t,
                    const SpectralGridPtr& rho, Diagnostics* diag) {
  check_time(t, "evolve");
  if (spec.modes.count(0)) require_admissible(0, gamma, "evolve");
  if (t == 0.0) return spec;
  return spectral_multiplier(spec, cone, gamma, [t](double x) { return std::polar(1.0, -t * x); }, rho, diag);
}

ModeSpectrum half_wave(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma, double t,
                       const SpectralGridPtr& rho) {
  check_time(t, "half_wave");
  if (spec.modes.count(0)) require_admissible(0, gamma, "half_wave");
  if (t == 0.0) return spec;
  ModeSpectrum out(spec.cone, spec.grid, spec.k_max);
  const auto m = [t](double x) { return std::polar(1.0, -t * x); };
  for (const auto& [k, p] : spec.modes) out.set(scalar_multiplier(k, cone, gamma, p, m, rho));
  return out;
}

namespace {

double nu_pm(int k, const ConeParams& cone, Sign sign) {
  const double h = sign == Sign::Plus ? 0.5 : -0.5;
  return std::abs(k / cone.sigma() + h);
}

double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

void check_heat_args(double t, PolarPoint x, PolarPoint y, const char* where) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError(std::string(where) + ": t must be positive");
  if (!(x.r >= 0.0) || !(y.r >= 0.0)) throw DomainError(std::string(where) + ": radii must be non-negative");
}

}  // namespace

cplx schrodinger_mode_kernel(int k, const ConeParams& cone, Sign sign, double t, double r, double s) {
  if (t == 0.0 || !std::isfinite(t)) throw DomainError("schrodinger_mode_kernel: t must be nonzero");
  if (!(r > 0.0) || !(s > 0.0)) throw DomainError("schrodinger_mode_kernel: r and s must be positive");
  const double nu = nu_pm(k, cone, sign);
  const cplx z(0.0, -r * s / (2.0 * t));
  const cplx phase = std::polar(1.0, (r * r + s * s) / (4.0 * t));
  return phase / cplx(0.0, 2.0 * t) * bessel_i(Order(nu), z);
}

HeatSeriesResult heat_kernel_series(const ConeParams& cone, Sign sign, double t, PolarPoint x, PolarPoint y,
                                    std::optional<int> k_trunc, Diagnostics* diag) {
  check_heat_args(t, x, y, "heat_kernel_series");
  if (k_trunc && *k_trunc < 1) throw DomainError("heat_kernel_series: K_trunc must be at least 1");
  constexpr int kCap = 400;
  const double sigma = cone.sigma();
  const double z = x.r * y.r / (2.0 * t);
  const double alpha = x.theta - y.theta;
  auto term = [&](int k) {
    return std::polar(bessel_i_scaled(Order(nu_pm(k, cone, sign)), z), -k * alpha / sigma);
  };
  cplx sum = term(0);
  const int kmax = k_trunc ? *k_trunc : kCap;
  int used = 0;
  double last = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const cplx a = term(k), b = term(-k);
    sum += a;
    sum += b;
    used = k;
    last = std::max(std::abs(a), std::abs(b));
    if (!k_trunc && last < 1e-16 * std::abs(sum)) break;
  }
  const double rel = std::abs(sum) > 0.0 ? last / std::abs(sum) : last;
  if (rel > 1e-14) {
    std::ostringstream os;
    os << "heat_kernel_series: last term " << rel << " of the sum at K = " << used;
    warn(diag, os.str());
  }
  const double d = x.r - y.r;
  const double pref = std::exp(-d * d / (4.0 * t)) / (2.0 * t) / (2.0 * kPi * sigma);
  return {pref * sum, used, rel};
}

std::vector<ImageAngle> image_angles(const ConeParams& cone, double theta, double omega) {
  constexpr double tol = 1e-12;
  const double alpha = theta - omega;
  const double period = 2.0 * kPi * cone.sigma();
  const auto lo = static_cast<long>(std::ceil((-kPi - alpha) / period)) - 1;
  const auto hi = static_cast<long>(std::floor((kPi - alpha) / period)) + 1;
  std::vector<ImageAngle> out;
  for (long j = lo; j <= hi; ++j) {
    const double beta = alpha + period * static_cast<double>(j);
    const double excess = std::abs(beta) - kPi;
    if (excess > tol) continue;
    out.push_back({beta, std::abs(excess) <= tol ? 0.5 : 1.0});
  }
  return out;
}

cplx b_pm(double tau, double theta, double omega, const ConeParams& cone, Sign sign, Diagnostics* diag) {
  if (!(tau > 0.0)) throw DomainError("b_pm: tau must be positive");
  const double sigma = cone.sigma();
  const double s = sign_value(sign);
  const double a = s * tau / 2.0;
  const double sh = std::sinh(tau / (2.0 * sigma));
  const double damp = std::exp(-tau / (2.0 * sigma)) * sh;
  auto part = [&](double phi) {
    const double sn = std::sin(phi / 2.0), cs = std::cos(phi / 2.0);
    const double den = 4.0 * (sh * sh + sn * sn);
    if (den < 2e-12) {
      std::ostringstream os;
      os << "b_pm: denominator " << den / 2.0 << " near the pole at tau = " << tau;
      warn(diag, os.str());
    }
    const double re = 4.0 * std::sinh(a) * (sn * sn - damp);
    const double im = -4.0 * std::cosh(a) * sn * cs;
    return cplx(re, im) / den;
  };
  const double alpha = theta - omega;
  return 0.5 * s * (part((alpha + kPi) / sigma) + part((alpha - kPi) / sigma));
}

cplx heat_kernel_closed(const ConeParams& cone, Sign sign, double t, PolarPoint x, PolarPoint y, Diagnostics* diag) {
  check_heat_args(t, x, y, "heat_kernel_closed");
  const double sigma = cone.sigma();
  const double s = sign_value(sign);
  const double z = x.r * y.r / (2.0 * t);
  const double e0 = -(x.r * x.r + y.r * y.r) / (4.0 * t);

  cplx geo{};
  for (const auto& im : image_angles(cone, x.theta, y.theta))
    geo += im.weight * std::polar(std::exp(e0 + z * std::cos(im.beta)), s * im.beta / 2.0);
  geo /= 2.0 * kPi;

  // Background: the imaginary part of B_pm carries Lorentzians of width ~ 2 sigma |sin((alpha +- pi)/(2 sigma))|
  // at tau = 0, so the range is split geometrically from that width.
  const double alpha = x.theta - y.theta;
  double width = 1.0;
  for (double phi : {(alpha + kPi) / sigma, (alpha - kPi) / sigma})
    width = std::min(width, 2.0 * sigma * std::abs(std::sin(phi / 2.0)));
  width = std::max(width, 1e-10);
  auto integrand = [&](double tau, int part) {
    if (tau <= 0.0) return 0.0;
    const double env = std::exp(e0 - z * std::cosh(tau));
    if (env == 0.0) return 0.0;
    const cplx v = env * (std::exp(-tau / 2.0) + b_pm(tau, x.theta, y.theta, cone, sign, diag));
    return part == 0 ? v.real() : v.imag();
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  std::vector<double> cuts{0.0};
  for (double c = width; c < 1.0; c *= 8.0) cuts.push_back(c);
  cuts.push_back(1.0);
  double re = 0.0, im = 0.0;
  for (int part = 0; part < 2; ++part) {
    double acc = 0.0;
    auto f = [&](double tau) { return integrand(tau, part); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += GK::integrate(f, cuts[i], cuts[i + 1], 12, 1e-13);
    acc += GK::integrate(f, 1.0, std::numeric_limits<double>::infinity(), 12, 1e-13);
    (part == 0 ? re : im) = acc;
  }
  const cplx background = cplx(re, im) / (2.0 * kPi * kPi * sigma);
  return (geo - background) / (2.0 * t);
}

double cone_distance_sq(const ConeParams& cone, PolarPoint x, PolarPoint y) {
  const double period = 2.0 * kPi * cone.sigma();
  double d = std::fmod(std::abs(x.theta - y.theta), period);
  d = std::min(d, period - d);
  if (d >= kPi) return (x.r + y.r) * (x.r + y.r);
  return std::max(0.0, x.r * x.r + y.r * y.r - 2.0 * x.r * y.r * std::cos(d));
}

}  // namespace cone
