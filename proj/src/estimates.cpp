#include "cone/estimates.hpp"

#include <algorithm>
#include <boost/rational.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cone/specfun.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using Rational = boost::rational<long long>;

// Continued-fraction reconstruction of x with denominator <= 10^6, accepted only if it converts back exactly.
std::optional<Rational> to_rational(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(y);
    if (std::abs(a) > 1e12) break;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) return Rational(h1, k1);
    const double frac = y - a;
    if (frac == 0.0) break;
    y = 1.0 / frac;
  }
  return std::nullopt;
}

struct Recip {
  double value;                 // 1/p
  std::optional<Rational> exact;
};

Recip reciprocal(double p) {
  if (std::isinf(p)) return {0.0, Rational(0)};
  const auto r = to_rational(p);
  if (r) return {1.0 / p, Rational(1) / *r};
  return {1.0 / p, std::nullopt};
}

// sign of (ca a + cb b - bound): -1, 0, +1
int compare(const Recip& a, const Recip& b, long long ca, long long cb, Rational bound) {
  if (a.exact && b.exact) {
    const Rational v = Rational(ca) * *a.exact + Rational(cb) * *b.exact - bound;
    return v < 0 ? -1 : (v > 0 ? 1 : 0);
  }
  const double v = ca * a.value + cb * b.value - boost::rational_cast<double>(bound);
  if (std::abs(v) <= 1e-12) return 0;
  return v < 0 ? -1 : 1;
}

}  // namespace

Weight::Weight(Kind kind, int j, double epsilon, double theta, const ExtensionParam& gamma)
    : kind_(kind), j_(j), epsilon_(epsilon), theta_(theta), gamma_(gamma) {
  require_admissible(0, gamma, "Weight");
  upper_ = gamma.sin_is_zero();
}

Weight Weight::wj(int j, const ExtensionParam& gamma) { return Weight(Kind::Wj, j, 0.0, 1.0, gamma); }

Weight Weight::fixed(double epsilon, double theta, const ExtensionParam& gamma) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
  if (!std::isfinite(theta)) throw ValidationError("theta", "must be finite");
  return Weight(Kind::Wfixed, 0, epsilon, theta, gamma);
}

std::array<double, 2> Weight::at(double r) const {
  if (!(r > 0.0)) throw DomainError("Weight: r must be positive");
  double w;
  if (kind_ == Kind::Wj)
    w = 1.0 / (1.0 + std::ldexp(1.0, j_) / std::sqrt(r));
  else
    w = std::pow(1.0 + std::pow(r, -0.5 - epsilon_), -theta_);
  return upper_ ? std::array<double, 2>{w, 1.0} : std::array<double, 2>{1.0, w};
}

void Weight::require_exponent(double q) const {
  if (kind_ != Kind::Wfixed) return;
  const double lo = std::isinf(q) ? 1.0 : 1.0 - 4.0 / q;
  if (!(theta_ > lo)) {
    std::ostringstream os;
    os << "weight exponent theta = " << theta_ << " must exceed 1 - 4/q = " << lo;
    throw RegimeError(os.str());
  }
}

std::string AdmissiblePair::label() const {
  std::string s;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += ",";
    s += name;
  };
  add(perp, "Perp");
  add(p0, "P0");
  add(full, "Full");
  add(weighted, "Weighted");
  return s.empty() ? "none" : s;
}

AdmissiblePair classify(double p, double q) {
  for (double v : {p, q})
    if (std::isnan(v) || v < 2.0) throw DomainError("classify: p and q must lie in [2, inf]");
  AdmissiblePair out;
  out.p = p;
  out.q = q;
  const Recip a = reciprocal(p), b = reciprocal(q);
  out.exact = a.exact && b.exact;
  out.sobolev_s = out.exact ? boost::rational_cast<double>(Rational(1) - *a.exact - Rational(2) * *b.exact)
                            : 1.0 - a.value - 2.0 * b.value;

  const bool endpoint = std::isinf(p) && q == 2.0;
  const bool open_box = p > 2.0 && q > 2.0;
  const Rational half(1, 2), quarter(1, 4);
  out.perp = endpoint || (open_box && compare(a, b, 2, 1, half) <= 0);
  const bool radial = endpoint || (open_box && compare(a, b, 1, 1, half) < 0);
  const bool below4 = compare(a, b, 0, 1, quarter) > 0;  // 1/q > 1/4
  out.p0 = radial && below4;
  out.full = out.perp && out.p0;
  out.weighted = radial && !below4 && std::isfinite(q);
  if (out.weighted) out.theta_min = 1.0 - 4.0 * b.value;
  return out;
}

double DecayFitReport::model_norm(double t) const {
  return std::exp(intercept) * std::pow(1.0 + std::ldexp(t, band_j), fitted_exponent);
}

DecayFitReport fit_decay(std::span<const double> times, std::span<const double> norms, int band_j) {
  if (times.size() != norms.size()) throw std::invalid_argument("fit_decay: times and norms differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw DomainError("fit_decay: times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("fit_decay: times must be strictly increasing");
    if (!(norms[i] > 0.0)) throw DomainError("fit_decay: norms must be positive");
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double s = std::ldexp(times[i], band_j);
    if (s < 10.0) continue;
    x.push_back(std::log1p(s));
    y.push_back(std::log(norms[i]));
  }
  if (x.size() < 8 || std::log10(std::expm1(x.back()) / std::expm1(x.front())) < 1.5) {
    std::ostringstream os;
    os << "fit_decay: need at least 8 samples spanning 1.5 decades of 2^j t >= 10, got " << x.size();
    throw SpanError(os.str());
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  DecayFitReport rep;
  rep.band_j = band_j;
  rep.times.assign(times.begin(), times.end());
  rep.norms.assign(norms.begin(), norms.end());
  rep.model = "C (1 + 2^j t)^a";
  rep.fitted_exponent = sxy / sxx;
  rep.intercept = my - rep.fitted_exponent * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - rep.intercept - rep.fitted_exponent * x[i];
    ss += e * e;
  }
  rep.residual = std::sqrt(ss / n);
  return rep;
}

double lq_norm(const SpinorField& u, double q, const Weight* weight) {
  if (!(q >= 1.0)) throw DomainError("lq_norm: q must be at least 1");
  if (!u.grid || u.m == 0 || u.values.empty()) throw std::invalid_argument("lq_norm: empty grid");
  if (weight) weight->require_exponent(q);
  const std::size_t n = u.grid->size();
  auto modulus = [&](std::size_t i, std::size_t j) {
    const Spinor& s = u.at(i, j);
    if (!weight) return std::sqrt(std::norm(s[0]) + std::norm(s[1]));
    const auto w = weight->at((*u.grid)[i]);
    return std::sqrt(w[0] * w[0] * std::norm(s[0]) + w[1] * w[1] * std::norm(s[1]));
  };
  if (std::isinf(q)) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < u.m; ++j) m = std::max(m, modulus(i, j));
    return m;
  }
  const double wt = u.angles().weight();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < u.m; ++j) s += std::pow(modulus(i, j), q);
    g[i] = wt * s;
  }
  return std::pow(std::max(0.0, u.grid->integrate(g)), 1.0 / q);
}

double mixed_norm(const TimeSeries& u, double p, double q, const std::optional<Weight>& weight) {
  if (u.samples.empty()) throw std::invalid_argument("mixed_norm: empty time grid");
  if (!(u.dt > 0.0)) throw DomainError("mixed_norm: dt must be positive");
  if (!(p >= 1.0)) throw DomainError("mixed_norm: p must be at least 1");
  std::vector<double> nq(u.samples.size());
  for (std::size_t i = 0; i < nq.size(); ++i) nq[i] = lq_norm(u.samples[i], q, weight ? &*weight : nullptr);
  if (std::isinf(p)) return *std::max_element(nq.begin(), nq.end());
  if (nq.size() == 1) return nq[0];
  double s = 0;
  for (std::size_t i = 0; i < nq.size(); ++i) {
    const double w = (i == 0 || i + 1 == nq.size()) ? 0.5 : 1.0;
    s += w * std::pow(nq[i], p);
  }
  return std::pow(s * u.dt, 1.0 / p);
}

ModeSpectrum dyadic_localize(const ModeSpectrum& spec, const DyadicBand& band, const ConeParams& cone,
                             const ExtensionParam& gamma, const SpectralGridPtr& rho) {
  if (spec.modes.count(0)) require_admissible(0, gamma, "dyadic_localize");
  return spectral_multiplier(spec, cone, gamma, [&band](double x) { return cplx(band(x)); }, rho);
}

EnergyDensity localize_density(const EnergyDensity& v, const DyadicBand& band) {
  EnergyDensity out = v;
  for (std::size_t a = 0; a < v.pos.size(); ++a) {
    const double w = band((*v.grid)[a]);
    out.pos[a] *= w;
    out.neg[a] *= w;
  }
  return out;
}

double hs_norm(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma, double s,
               bool homogeneous, const SpectralGridPtr& rho) {
  double total = 0;
  for (const auto& [k, p] : spec.modes) {
    const EnergyDensity v = relativistic_forward(k, cone, gamma, p, rho);
    std::vector<double> g(v.pos.size());
    for (std::size_t a = 0; a < g.size(); ++a) {
      const double ps = std::pow((*rho)[a], s);
      const double m = homogeneous ? ps : 1.0 + ps;
      g[a] = m * m * (std::norm(v.pos[a]) + std::norm(v.neg[a]));
    }
    total += rho->integrate(g);
  }
  return std::sqrt(std::max(0.0, total));
}

TimeWindow TimeWindow::standard(int j) { return {std::ldexp(10.0, -j), std::ldexp(1000.0, -j), 32}; }

std::vector<double> TimeWindow::times() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || samples < 2) throw DomainError("TimeWindow: need 0 < t_min < t_max, 2+ samples");
  std::vector<double> t(samples);
  const double a = std::log(t_min), b = std::log(t_max);
  for (int i = 0; i < samples; ++i) t[i] = std::exp(a + (b - a) * i / (samples - 1));
  t.back() = t_max;
  return t;
}

namespace {

double active_radius(const SpinorProfile& p) {
  double peak = 0;
  for (std::size_t i = 0; i < p.size(); ++i) peak = std::max({peak, std::abs(p.upper[i]), std::abs(p.lower[i])});
  for (std::size_t i = p.size(); i-- > 0;)
    if (std::abs(p.upper[i]) > 1e-10 * peak || std::abs(p.lower[i]) > 1e-10 * peak) return (*p.grid)[i];
  return p.grid->min();
}

// Evaluation radii: a log-spaced inner part (integrated with the grid's power-law inner segment) and a uniform
// part with quarter-wavelength spacing.
struct RadialSamples {
  std::shared_ptr<const RadialGrid> inner;
  std::vector<double> outer;
  double step;

  std::vector<double> all() const {
    std::vector<double> r = inner->points();
    r.insert(r.end(), outer.begin(), outer.end());
    return r;
  }
  double integrate(std::span<const double> g) const {
    const std::size_t ni = inner->size();
    double s = inner->integrate(g.subspan(0, ni));
    double prev_r = inner->max(), prev = g[ni - 1] * prev_r;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      const double cur = g[ni + i] * outer[i];
      s += 0.5 * (outer[i] - prev_r) * (prev + cur);
      prev_r = outer[i];
      prev = cur;
    }
    return s;
  }
};

}  // namespace

DecayFitReport verify_dispersive(DispersiveKind kind, const ConeParams& cone, const ExtensionParam& gamma,
                                 const DyadicBand& band, const ModeSpectrum& data, const TimeWindow& window, double q,
                                 Diagnostics* diag) {
  if (kind == DispersiveKind::P0Lq && !(q >= 2.0 && q < 4.0)) {
    std::ostringstream os;
    os << "verify_dispersive: the weightless L^q decay of the singular component needs 2 <= q < 4, got q = " << q;
    throw RegimeError(os.str());
  }
  const bool singular = kind != DispersiveKind::Perp;
  if (singular) require_admissible(0, gamma, "verify_dispersive");
  std::vector<const SpinorProfile*> modes;
  for (const auto& [k, p] : data.modes)
    if ((k == 0) == singular) modes.push_back(&p);
  if (modes.empty()) throw DomainError("verify_dispersive: data has no modes in the selected component");

  const double sc = band.scale(), lo = band.lower(), hi = band.upper();
  double r_act = 0;
  for (const auto* p : modes) r_act = std::max(r_act, active_radius(*p));
  const auto times = window.times();
  auto r_end = [&](double t) { return std::abs(t) + r_act + 20.0 / sc; };

  // Nested uniform rho rules: the finest resolves the phase rate of the last time, coarser ones are subsets.
  const double rate_max = std::abs(times.back()) + r_end(times.back());
  const double need = (hi - lo) * rate_max / 1.5;
  const std::size_t n_fine = std::size_t{1} << static_cast<int>(std::ceil(std::log2(std::max(need, 64.0))));
  const double d_fine = (hi - lo) / static_cast<double>(n_fine);
  std::vector<double> fine(n_fine + 1);
  for (std::size_t i = 0; i <= n_fine; ++i) fine[i] = lo + d_fine * static_cast<double>(i);

  struct ModeData {
    int k;
    std::vector<cplx> pos, neg;
  };
  std::vector<ModeData> dens;
  for (const auto* p : modes) {
    auto v = relativistic_forward_at(p->k, cone, gamma, *p, fine);
    for (std::size_t i = 0; i <= n_fine; ++i) {
      const double w = band(fine[i]);
      v.pos[i] *= w;
      v.neg[i] *= w;
    }
    dens.push_back({p->k, std::move(v.pos), std::move(v.neg)});
  }

  const int k_max = std::max(std::abs(dens.front().k), std::abs(dens.back().k));
  const std::size_t m_ang = singular ? 1 : static_cast<std::size_t>(8 * k_max + 8);
  const AngularGrid ang(cone.sigma(), m_ang);
  const std::optional<Weight> wt =
      kind == DispersiveKind::P0Weighted ? std::optional<Weight>(Weight::wj(band.j(), gamma)) : std::nullopt;

  std::vector<double> norms;
  for (double t : times) {
    RadialSamples rs;
    rs.inner = std::make_shared<const RadialGrid>(1e-4 / sc, 1.0 / sc, 256);
    rs.step = kPi / (4.0 * hi);
    for (double r = 1.0 / sc + rs.step; r <= r_end(t); r += rs.step) rs.outer.push_back(r);
    const auto radii = rs.all();

    std::size_t stride = 1;
    while (2 * stride * d_fine * (std::abs(t) + r_end(t)) <= 1.5 && 2 * stride <= n_fine) stride *= 2;
    QuadratureRule rule;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i <= n_fine; i += stride) {
      idx.push_back(i);
      rule.nodes.push_back(fine[i]);
      rule.weights.push_back(d_fine * static_cast<double>(stride));
    }

    std::vector<Spinors> u;
    for (const auto& m : dens) {
      std::vector<cplx> pos(idx.size()), neg(idx.size());
      for (std::size_t a = 0; a < idx.size(); ++a) {
        const cplx ph = std::polar(1.0, -t * fine[idx[a]]);
        pos[a] = m.pos[idx[a]] * ph;
        neg[a] = m.neg[idx[a]] * std::conj(ph);
      }
      u.push_back(relativistic_inverse_at(m.k, cone, gamma, pos, neg, rule, radii));
    }

    std::vector<std::vector<cplx>> harm(dens.size(), std::vector<cplx>(m_ang));
    for (std::size_t a = 0; a < dens.size(); ++a)
      for (std::size_t j = 0; j < m_ang; ++j) harm[a][j] = angular_eigen(dens[a].k, cone, ang[j]).harmonic[0];

    double sup = 0;
    std::vector<double> g(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const std::array<double, 2> w = wt ? wt->at(radii[i]) : std::array<double, 2>{1.0, 1.0};
      double acc = 0;
      for (std::size_t j = 0; j < m_ang; ++j) {
        cplx up{}, dn{};
        for (std::size_t a = 0; a < dens.size(); ++a) {
          up += u[a].upper[i] * harm[a][j];
          dn += u[a].lower[i] * harm[a][j];
        }
        const double mod = std::sqrt(w[0] * w[0] * std::norm(up) + w[1] * w[1] * std::norm(dn));
        sup = std::max(sup, mod);
        if (kind == DispersiveKind::P0Lq) acc += std::pow(mod, q);
      }
      g[i] = acc * ang.weight();
    }
    if (kind == DispersiveKind::P0Lq)
      norms.push_back(std::pow(rs.integrate(g), 1.0 / q));
    else
      norms.push_back(sup);
  }

  DecayFitReport rep = fit_decay(times, norms, band.j());
  switch (kind) {
    case DispersiveKind::Perp: rep.model = "sup |u|, C (1 + 2^j t)^a"; rep.expected_exponent = -0.5; break;
    case DispersiveKind::P0Weighted: rep.model = "sup |W_j u|, C (1 + 2^j t)^a"; rep.expected_exponent = -0.5; break;
    case DispersiveKind::P0Lq: {
      std::ostringstream os;
      os << "L^" << q << " norm, C (1 + 2^j t)^a";
      rep.model = os.str();
      rep.expected_exponent = -0.5 * (1.0 - 2.0 / q);
      break;
    }
  }
  if (rep.residual > 0.1) {
    std::ostringstream os;
    os << "verify_dispersive: poor power-law fit, rms log residual " << rep.residual;
    warn(diag, os.str());
  }
  return rep;
}

double counterexample_chi(double rho) {
  if (rho <= 1.0 || rho >= 2.0) return 0.0;
  const double y = 2.0 * rho - 3.0;
  return std::exp(1.0 - 1.0 / (1.0 - y * y));
}

namespace {

const QuadratureRule& chi_rule() {
  static const QuadratureRule q = gauss_legendre_panels(1.0, 2.0, 48);
  return q;
}

}  // namespace

cplx counterexample_profile(double t, double r) {
  if (!(r > 0.0)) throw DomainError("counterexample_profile: r must be positive");
  const auto& q = chi_rule();
  const BesselJ j(Order(-0.5));
  double re = 0, im = 0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double x = q.nodes[i];
    const double a = q.weights[i] * j(r * x) * counterexample_chi(x) * x;
    re += a * std::cos(t * x);
    im += a * std::sin(t * x);
  }
  return {re, im};
}

CounterexampleTable counterexample_run(double q, std::span<const double> inner_cutoffs, std::span<const double> times) {
  if (!(q >= 4.0)) {
    std::ostringstream os;
    os << "counterexample_run: q = " << q << " < 4 is inside the Strichartz range, not a counterexample";
    throw RegimeError(os.str());
  }
  if (inner_cutoffs.empty()) throw DomainError("counterexample_run: no inner cutoffs");
  for (std::size_t i = 0; i < inner_cutoffs.size(); ++i) {
    if (!(inner_cutoffs[i] > 0.0) || inner_cutoffs[i] >= 1.0) throw DomainError("counterexample_run: cutoffs must lie in (0, 1)");
    if (i > 0 && !(inner_cutoffs[i] < inner_cutoffs[i - 1])) throw DomainError("counterexample_run: cutoffs must decrease");
  }
  const std::vector<double> ts = times.empty() ? std::vector<double>{0.0} : std::vector<double>(times.begin(), times.end());
  CounterexampleTable tab;
  tab.q = q;
  tab.r_max = 60.0;

  for (double t : ts) {
    const auto& cq = chi_rule();
    double re = 0, im = 0;
    for (std::size_t i = 0; i < cq.nodes.size(); ++i) {
      const double x = cq.nodes[i];
      const double a = cq.weights[i] * counterexample_chi(x) * std::sqrt(x);
      re += a * std::cos(t * x);
      im += a * std::sin(t * x);
    }
    const double amp = std::sqrt(2.0 / kPi) * std::hypot(re, im);

    // int_1^R by panels in r, int_eps^1 by panels in ln r; cumulative over the decreasing cutoffs.
    auto power = [&](double r) { return std::pow(std::abs(counterexample_profile(t, r)), q) * r; };
    double outer = 0;
    const auto ro = gauss_legendre_panels(1.0, tab.r_max, 236);
    for (std::size_t i = 0; i < ro.nodes.size(); ++i) outer += ro.weights[i] * power(ro.nodes[i]);
    double acc = outer, upper = 1.0;
    for (double eps : inner_cutoffs) {
      const double a = std::log(eps), b = std::log(upper);
      const auto panels = static_cast<std::size_t>(std::ceil(4.0 * (b - a))) + 1;
      const auto rl = gauss_legendre_panels(a, b, panels);
      for (std::size_t i = 0; i < rl.nodes.size(); ++i) {
        const double r = std::exp(rl.nodes[i]);
        acc += rl.weights[i] * power(r) * r;
      }
      upper = eps;
      tab.rows.push_back({eps, t, std::pow(acc, 1.0 / q), amp});
    }
  }

  const double t0 = ts.front();
  std::vector<double> x, y;
  for (const auto& row : tab.rows)
    if (row.t == t0) {
      x.push_back(std::log(1.0 / row.epsilon));
      y.push_back(std::log(row.norm));
    }
  if (x.size() >= 2) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i] / n;
      my += y[i] / n;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    tab.fitted_power = sxy / sxx;
  } else {
    tab.fitted_power = std::numeric_limits<double>::quiet_NaN();
  }
  return tab;
}

}  // namespace cone
