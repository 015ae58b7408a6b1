#include "cone/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <mutex>
#include <numbers>
#include <sstream>

namespace cone {

namespace {

// int_0^{x1} J_nu(y x) c x^nu x dx = c x1^{nu+1} J_{nu+1}(y x1) / y, divided by c x1^nu.
std::vector<double> power_law_tail(double nu, double x1, const std::vector<double>& y) {
  const BesselJ j(Order(nu + 1.0));
  std::vector<double> t(y.size());
  for (std::size_t a = 0; a < y.size(); ++a) t[a] = x1 * j(y[a] * x1) / y[a];
  return t;
}

template <class V>
double active_extent(const LogGrid& g, const V& v) {
  double peak = 0.0;
  for (const auto& x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) return 0.0;
  for (std::size_t i = v.size(); i-- > 0;)
    if (std::abs(v[i]) > 1e-8 * peak) return g[i];
  return 0.0;
}

void check_budget(const char* where, double active, double extent, std::size_t n, Diagnostics* diag) {
  if (!diag || !oscillation_budget_exceeded(active, extent, n)) return;
  std::ostringstream os;
  os << where << ": degraded, active frequency x extent = " << active * extent << " exceeds N pi / 8 = "
     << n * std::numbers::pi / 8;
  diag->warn(os.str());
}

}  // namespace

bool oscillation_budget_exceeded(double x_active, double y_max, std::size_t n) {
  return x_active * y_max > static_cast<double>(n) * std::numbers::pi / 8.0;
}

HankelPlan::HankelPlan(Order nu, RadialGridPtr r, SpectralGridPtr rho, kernels::Exec exec)
    : nu_(nu.value()), r_(std::move(r)), rho_(std::move(rho)), exec_(exec) {
  wr_ = r_->weights();
  wrho_ = rho_->weights();
  tail_rho_ = power_law_tail(nu_, r_->min(), rho_->points());
  tail_r_ = power_law_tail(nu_, rho_->min(), r_->points());
  m_.resize(rho_->size() * r_->size());
  kernels::bessel_matrix(BesselJ(nu), rho_->points(), r_->points(), m_, exec_);
}

std::vector<cplx> HankelPlan::forward(std::span<const cplx> f, Diagnostics* diag) const {
  if (f.size() != r_->size()) throw std::invalid_argument("hankel forward: data size differs from the radial grid");
  std::vector<cplx> x(f.size()), y(rho_->size());
  for (std::size_t i = 0; i < f.size(); ++i) x[i] = f[i] * wr_[i];
  kernels::matvec(m_, rho_->size(), x, y, exec_);
  for (std::size_t a = 0; a < y.size(); ++a) y[a] += tail_rho_[a] * f[0];
  check_budget("hankel_forward", active_extent(*rho_, y), r_->max(), r_->size(), diag);
  return y;
}

std::vector<cplx> HankelPlan::inverse(std::span<const cplx> F, Diagnostics* diag) const {
  if (F.size() != rho_->size()) throw std::invalid_argument("hankel inverse: data size differs from the spectral grid");
  std::vector<cplx> x(F.size()), y(r_->size());
  for (std::size_t a = 0; a < F.size(); ++a) x[a] = F[a] * wrho_[a];
  kernels::matvec_transposed(m_, rho_->size(), x, y, exec_);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += tail_r_[i] * F[0];
  check_budget("hankel_inverse", active_extent(*r_, y), rho_->max(), rho_->size(), diag);
  return y;
}

namespace {

struct CacheEntry {
  double nu;
  std::weak_ptr<const RadialGrid> r;
  std::weak_ptr<const SpectralGrid> rho;
  const void* r_raw;
  const void* rho_raw;
  std::shared_ptr<const HankelPlan> plan;
};

constexpr std::size_t kCacheCapacity = 6;
std::mutex g_cache_mutex;
std::list<CacheEntry> g_cache;

}  // namespace

std::shared_ptr<const HankelPlan> hankel_plan(Order nu, const RadialGridPtr& r, const SpectralGridPtr& rho) {
  {
    std::lock_guard lock(g_cache_mutex);
    g_cache.remove_if([](const CacheEntry& e) { return e.r.expired() || e.rho.expired(); });
    for (auto it = g_cache.begin(); it != g_cache.end(); ++it)
      if (it->nu == nu.value() && it->r_raw == r.get() && it->rho_raw == rho.get()) {
        g_cache.splice(g_cache.begin(), g_cache, it);
        return it->plan;
      }
  }
  auto plan = std::make_shared<const HankelPlan>(nu, r, rho);
  std::lock_guard lock(g_cache_mutex);
  g_cache.push_front({nu.value(), r, rho, r.get(), rho.get(), plan});
  if (g_cache.size() > kCacheCapacity) g_cache.pop_back();
  return plan;
}

void clear_plan_cache() {
  std::lock_guard lock(g_cache_mutex);
  g_cache.clear();
}

std::vector<cplx> hankel_forward(Order nu, const RadialGridPtr& r, std::span<const cplx> f, const SpectralGridPtr& out,
                                 Diagnostics* diag) {
  return hankel_plan(nu, r, out)->forward(f, diag);
}

std::vector<cplx> hankel_inverse(Order nu, const SpectralGridPtr& rho, std::span<const cplx> F, const RadialGridPtr& out,
                                 Diagnostics* diag) {
  return hankel_plan(nu, out, rho)->inverse(F, diag);
}

std::vector<cplx> hankel_forward_at(Order nu, const RadialGrid& r, std::span<const cplx> f, std::span<const double> rho) {
  if (f.size() != r.size()) throw std::invalid_argument("hankel_forward_at: data size differs from the radial grid");
  const auto& w = r.weights();
  std::vector<cplx> x(f.size()), y(rho.size());
  for (std::size_t i = 0; i < f.size(); ++i) x[i] = f[i] * w[i];
  kernels::bessel_apply(BesselJ(nu), rho, r.points(), x, y);
  const auto tail = power_law_tail(nu.value(), r.min(), std::vector<double>(rho.begin(), rho.end()));
  for (std::size_t a = 0; a < y.size(); ++a) y[a] += tail[a] * f[0];
  return y;
}

EnergyDensity::EnergyDensity(SpectralGridPtr g) : grid(std::move(g)) {
  pos.assign(grid->size(), cplx{});
  neg.assign(grid->size(), cplx{});
}

double EnergyDensity::norm() const {
  std::vector<double> g(pos.size());
  for (std::size_t a = 0; a < g.size(); ++a) g[a] = std::norm(pos[a]) + std::norm(neg[a]);
  return std::sqrt(std::max(0.0, grid->integrate(g)));
}

SpectralGridPtr default_spectral_grid() {
  static const SpectralGridPtr g = std::make_shared<const SpectralGrid>(SpectralGrid::standard());
  return g;
}

namespace {

// (H_upper f1, H_lower f2) -> (v(+rho), v(-rho)) and back, per the sign pattern of mode k.
void combine(const ModeOrders& o, std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> pos,
             std::span<cplx> neg) {
  const double c = o.sign / std::numbers::sqrt2;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx sum = c * (a[i] + b[i]), diff = c * (a[i] - b[i]);
    pos[i] = o.plus ? sum : diff;
    neg[i] = o.plus ? diff : sum;
  }
}

void split(const ModeOrders& o, std::span<const cplx> pos, std::span<const cplx> neg, std::vector<cplx>& s,
           std::vector<cplx>& d) {
  const double c = o.sign / std::numbers::sqrt2;
  s.resize(pos.size());
  d.resize(pos.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = c * (pos[i] + neg[i]);
    d[i] = o.plus ? c * (pos[i] - neg[i]) : c * (neg[i] - pos[i]);
  }
}

ModeOrders checked_orders(int k, const ConeParams& cone, const ExtensionParam& gamma, const char* where) {
  if (k == 0) require_admissible(0, gamma, where);
  return mode_orders(k, cone, gamma);
}

}  // namespace

EnergyDensity relativistic_forward(int k, const ConeParams& cone, const ExtensionParam& gamma, const SpinorProfile& p,
                                   const SpectralGridPtr& rho, Diagnostics* diag) {
  const ModeOrders o = checked_orders(k, cone, gamma, "relativistic_forward");
  const auto a = hankel_forward(Order(o.upper), p.grid, p.upper, rho, diag);
  const auto b = hankel_forward(Order(o.lower), p.grid, p.lower, rho, diag);
  EnergyDensity v(rho);
  combine(o, a, b, v.pos, v.neg);
  return v;
}

SpinorProfile relativistic_inverse(int k, const ConeParams& cone, const ExtensionParam& gamma, const EnergyDensity& v,
                                   const RadialGridPtr& grid, Diagnostics* diag) {
  const ModeOrders o = checked_orders(k, cone, gamma, "relativistic_inverse");
  std::vector<cplx> s, d;
  split(o, v.pos, v.neg, s, d);
  return SpinorProfile(k, grid, hankel_inverse(Order(o.upper), v.grid, s, grid, diag),
                       hankel_inverse(Order(o.lower), v.grid, d, grid, diag));
}

SignedSamples relativistic_forward_at(int k, const ConeParams& cone, const ExtensionParam& gamma,
                                      const SpinorProfile& p, std::span<const double> rho) {
  const ModeOrders o = checked_orders(k, cone, gamma, "relativistic_forward_at");
  const auto a = hankel_forward_at(Order(o.upper), *p.grid, p.upper, rho);
  const auto b = hankel_forward_at(Order(o.lower), *p.grid, p.lower, rho);
  SignedSamples v{std::vector<cplx>(rho.size()), std::vector<cplx>(rho.size())};
  combine(o, a, b, v.pos, v.neg);
  return v;
}

Spinors relativistic_inverse_at(int k, const ConeParams& cone, const ExtensionParam& gamma, std::span<const cplx> pos,
                                std::span<const cplx> neg, const QuadratureRule& rule, std::span<const double> r) {
  const ModeOrders o = checked_orders(k, cone, gamma, "relativistic_inverse_at");
  if (pos.size() != rule.nodes.size() || neg.size() != rule.nodes.size())
    throw std::invalid_argument("relativistic_inverse_at: density size differs from the rule");
  std::vector<cplx> s, d;
  split(o, pos, neg, s, d);
  for (std::size_t a = 0; a < s.size(); ++a) {
    const double w = rule.weights[a] * rule.nodes[a];
    s[a] *= w;
    d[a] *= w;
  }
  Spinors out{std::vector<cplx>(r.size()), std::vector<cplx>(r.size())};
  kernels::bessel_apply(BesselJ(Order(o.upper)), r, rule.nodes, s, out.upper);
  kernels::bessel_apply(BesselJ(Order(o.lower)), r, rule.nodes, d, out.lower);
  return out;
}

double diagonalization_residual(int k, const ConeParams& cone, const ExtensionParam& gamma, const SpinorProfile& p,
                                const SpectralGridPtr& rho, Diagnostics* diag) {
  if (k == 0) require_admissible(0, gamma, "diagonalization_residual");
  const EnergyDensity lhs = relativistic_forward(k, cone, gamma, apply_dk(k, cone, p, diag), rho, diag);
  EnergyDensity rhs = relativistic_forward(k, cone, gamma, p, rho, diag);
  for (std::size_t a = 0; a < rhs.pos.size(); ++a) {
    rhs.pos[a] *= (*rho)[a];
    rhs.neg[a] *= -(*rho)[a];
  }
  EnergyDensity diff(rho);
  for (std::size_t a = 0; a < rhs.pos.size(); ++a) {
    diff.pos[a] = lhs.pos[a] - rhs.pos[a];
    diff.neg[a] = lhs.neg[a] - rhs.neg[a];
  }
  return diff.norm() / rhs.norm();
}

}  // namespace cone
