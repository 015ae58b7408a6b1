#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "cone/hankel.hpp"
#include "cone/specfun.hpp"

using namespace cone;
using std::numbers::pi;

namespace {

RadialGridPtr std_grid() {
  static const RadialGridPtr g = std::make_shared<const RadialGrid>(RadialGrid::standard());
  return g;
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b, const LogGrid& g) {
  std::vector<double> d(a.size()), n(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    d[i] = std::norm(a[i] - b[i]);
    n[i] = std::norm(b[i]);
  }
  return std::sqrt(g.integrate(d) / g.integrate(n));
}

// r^nu exp(-(r^2 - c^2)^2 / (8 c^2)): a bump of unit width at r = c, even in r
// after removing r^nu, hence spectrally localized for H_nu.
double gauss_bump(double nu, double r, double c) {
  const double d = r * r - c * c;
  return std::pow(r, nu) * std::exp(-d * d / (8.0 * c * c));
}

SpinorProfile bump_spinor(int k, const ConeParams& cone, const ExtensionParam& gamma, const RadialGridPtr& g,
                          double center = 2.0) {
  const ModeOrders o = mode_orders(k, cone, gamma);
  SpinorProfile p(k, g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = (*g)[i];
    p.upper[i] = gauss_bump(o.upper, r, center) * cplx(1.0, 0.3);
    p.lower[i] = gauss_bump(o.lower, r, 1.2 * center) * cplx(-0.4, 0.8);
  }
  return p;
}

double gauss(double x, double c, double w) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); }

double bump(double r, double a, double b) {
  if (r <= a || r >= b) return 0.0;
  const double y = (2.0 * r - a - b) / (b - a);
  return std::exp(-1.0 / (1.0 - y * y));
}

const ExtensionParam kGammas[] = {ExtensionParam::sin0(), ExtensionParam::cos0(), ExtensionParam::sin0_flipped(),
                                  ExtensionParam::cos0_flipped()};

}  // namespace

TEST_CASE("self-reciprocal Gaussian") {
  auto g = std_grid();
  std::vector<cplx> f(g->size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-(*g)[i] * (*g)[i] / 2);
  const auto F = hankel_forward(Order(0.0), g, f, default_spectral_grid());
  const auto& rho = *default_spectral_grid();
  double err = 0.0;
  for (std::size_t a = 0; a < F.size(); ++a) err = std::max(err, std::abs(F[a] - std::exp(-rho[a] * rho[a] / 2)));
  CHECK(err < 1e-8);
}

TEST_CASE("H_1/2 K_1/2 = rho^1/2 / (1 + rho^2)") {
  // K_1/2 ~ r^{-1/2} at the origin, so the grid starts far enough in for the missed segment to be negligible.
  auto g = std::make_shared<const RadialGrid>(1e-8, 40.0, 8192);
  auto rho = std::make_shared<const SpectralGrid>(1e-2, 20.0, 256);
  std::vector<cplx> f(g->size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = bessel_k(Order(0.5), (*g)[i]);
  const auto F = hankel_forward(Order(0.5), g, f, rho);
  double err = 0.0;
  for (std::size_t a = 0; a < F.size(); ++a) {
    const double p = (*rho)[a], ref = std::sqrt(p) / (1 + p * p);
    err = std::max(err, std::abs(F[a] - ref) / ref);
  }
  CHECK(err < 1e-6);
}

TEST_CASE("band-limited round trip H(H F) = F") {
  auto g = std_grid();
  auto rho = default_spectral_grid();
  for (double nu : {0.0, 1.5, 4.0}) {
    std::vector<cplx> F(rho->size());
    for (std::size_t a = 0; a < F.size(); ++a) F[a] = gauss((*rho)[a], 2.0, 0.3) * cplx(1.0, -0.5);
    const auto f = hankel_inverse(Order(nu), rho, F, g);
    const auto back = hankel_forward(Order(nu), g, f, rho);
    CHECK(rel_l2(back, F, *rho) < 1e-6);
  }
}

TEST_CASE("H_nu involution on Gaussian-bump data") {
  auto g = std_grid();
  auto rho = default_spectral_grid();
  for (double nu : {-0.5, 0.5, 1.5, 3.5})
    for (double c : {0.0, 3.0}) {
      std::vector<cplx> f(g->size());
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double r = (*g)[i];
        f[i] = c == 0.0 ? std::pow(r, nu) * std::exp(-r * r / 2) : gauss_bump(nu, r, c);
      }
      const auto back = hankel_inverse(Order(nu), rho, hankel_forward(Order(nu), g, f, rho), g);
      const double e = rel_l2(back, f, *g);
      MESSAGE("nu " << nu << " center " << c << " involution error " << e);
      CHECK(e < 1e-6);
    }
}

TEST_CASE("oscillation budget flag") {
  CHECK(oscillation_budget_exceeded(64.0, 40.0, 4096));
  CHECK_FALSE(oscillation_budget_exceeded(10.0, 40.0, 4096));
  auto g = std_grid();
  std::vector<cplx> f(g->size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sqrt((*g)[i]) * std::exp(-(*g)[i]);  // slow spectral decay
  Diagnostics d;
  hankel_forward(Order(0.5), g, f, default_spectral_grid(), &d);
  CHECK_FALSE(d.empty());
}

TEST_CASE("serial and parallel plans agree bit for bit") {
  auto g = std::make_shared<const RadialGrid>(1e-3, 10.0, 300);
  auto rho = std::make_shared<const SpectralGrid>(1e-2, 30.0, 200);
  const HankelPlan ps(Order(1.25), g, rho, kernels::Exec::Serial), pp(Order(1.25), g, rho, kernels::Exec::Parallel);
  std::vector<cplx> f(g->size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = cplx(std::sin((*g)[i]), std::exp(-(*g)[i]));
  CHECK(ps.forward(f) == pp.forward(f));
  const auto F = ps.forward(f);
  CHECK(ps.inverse(F) == pp.inverse(F));
}

TEST_CASE("relativistic transform: structure") {
  auto g = std_grid();
  const ConeParams cone(0.7);
  SUBCASE("zero profile") {
    const auto v = relativistic_forward(2, cone, ExtensionParam::sin0(), SpinorProfile(2, g));
    CHECK(v.norm() == 0.0);
  }
  SUBCASE("upper-only data is even in rho for k >= 1") {
    auto p = bump_spinor(1, cone, ExtensionParam::sin0(), g);
    std::fill(p.lower.begin(), p.lower.end(), cplx{});
    const auto v = relativistic_forward(1, cone, ExtensionParam::sin0(), p);
    CHECK(v.pos == v.neg);
  }
  SUBCASE("inadmissible gamma") {
    CHECK_THROWS_AS(relativistic_forward(0, cone, ExtensionParam(pi / 4), SpinorProfile(0, g)), AdmissibilityError);
    CHECK_THROWS_AS(diagonalization_residual(0, cone, ExtensionParam(pi / 4), SpinorProfile(0, g)), AdmissibilityError);
  }
  SUBCASE("windowed eigenfunction concentrates at +rho0") {
    const double rho0 = 2.0;
    for (int k : {-1, 0, 2}) {
      auto p = generalized_eigenfunction_profile(k, cone, ExtensionParam::cos0(), rho0, g);
      for (std::size_t i = 0; i < g->size(); ++i) p.upper[i] *= std::exp(-std::pow((*g)[i] / 12.0, 2)),
                                                   p.lower[i] *= std::exp(-std::pow((*g)[i] / 12.0, 2));
      const auto v = relativistic_forward(k, cone, ExtensionParam::cos0(), p);
      const auto& rho = *v.grid;
      std::vector<double> near(rho.size()), all(rho.size());
      for (std::size_t a = 0; a < rho.size(); ++a) {
        all[a] = std::norm(v.pos[a]) + std::norm(v.neg[a]);
        near[a] = std::abs(rho[a] - rho0) < 0.5 ? std::norm(v.pos[a]) : 0.0;
      }
      CHECK(rho.integrate(near) > 0.99 * rho.integrate(all));
    }
  }
}

TEST_CASE("relativistic transform agrees with direct eigenfunction inner products") {
  auto g = std::make_shared<const RadialGrid>(1e-3, 12.0, 2048);
  auto rho = std::make_shared<const SpectralGrid>(0.05, 10.0, 64);
  for (int k : {-2, -1, 0, 1, 2})
    for (double s : {0.4, 1.0})
      for (const auto& gamma : kGammas) {
        const ConeParams cone(s);
        SpinorProfile p(k, g);
        for (std::size_t i = 0; i < g->size(); ++i) {
          const double r = (*g)[i];
          p.upper[i] = bump(r, 1.0, 5.0) * cplx(1.0, 0.5);
          p.lower[i] = bump(r, 2.0, 7.0) * cplx(-0.3, 1.0);
        }
        const auto v = relativistic_forward(k, cone, gamma, p, rho);
        double err = 0.0, scale = 0.0;
        for (std::size_t a = 0; a < rho->size(); ++a)
          for (int sgn : {1, -1}) {
            const auto psi = generalized_eigenfunction_profile(k, cone, gamma, sgn * (*rho)[a], g);
            cplx direct{};
            for (std::size_t i = 0; i < g->size(); ++i)
              direct += g->weights()[i] * (p.upper[i] * psi.upper[i] + p.lower[i] * psi.lower[i]);
            const cplx got = sgn > 0 ? v.pos[a] : v.neg[a];
            err = std::max(err, std::abs(got - direct));
            scale = std::max(scale, std::abs(direct));
          }
        CHECK(err < 1e-10 * scale);
      }
}

TEST_CASE("relativistic transform: Parseval, round trip, sectors") {
  auto g = std_grid();
  for (double s : {0.4, 1.0})
    for (int k = -3; k <= 3; ++k)
      for (const auto& gamma : kGammas) {
        const ConeParams cone(s);
        const auto p = bump_spinor(k, cone, gamma, g);
        const auto v = relativistic_forward(k, cone, gamma, p);
        CHECK(std::abs(v.norm() - p.norm()) < 1e-6 * p.norm());
        const auto back = relativistic_inverse(k, cone, gamma, v, g);
        CHECK((back - p).norm() < 1e-6 * p.norm());
        if (k != 0 && &gamma != &kGammas[0]) continue;

        EnergyDensity neg_only(v.grid);
        for (std::size_t a = 0; a < v.neg.size(); ++a) neg_only.neg[a] = gauss((*v.grid)[a], 2.0, 0.3) * cplx(0.6, 0.8);
        const auto q = relativistic_inverse(k, cone, gamma, neg_only, g);
        const auto w = relativistic_forward(k, cone, gamma, q);
        std::vector<double> leak(w.pos.size()), miss(w.pos.size());
        for (std::size_t a = 0; a < leak.size(); ++a) {
          leak[a] = std::norm(w.pos[a]);
          miss[a] = std::norm(w.neg[a] - neg_only.neg[a]);
        }
        CHECK(std::sqrt(w.grid->integrate(leak)) < 1e-6 * neg_only.norm());
        CHECK_MESSAGE(std::sqrt(w.grid->integrate(miss)) < 1e-6 * neg_only.norm(), "k " << k << " sigma " << s << " gamma " << gamma.label());
      }
}

TEST_CASE("diagonalization residual") {
  auto g = std_grid();
  const double r1 = diagonalization_residual(1, ConeParams(1.0), ExtensionParam::sin0(),
                                             bump_spinor(1, ConeParams(1.0), ExtensionParam::sin0(), g, 4.0));
  MESSAGE("k=1 residual " << r1);
  CHECK(r1 < 1e-4);
  SpinorProfile reg(0, g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = (*g)[i];
    reg.upper[i] = bump(r, 1.0, 6.0);
    reg.lower[i] = cplx(0.0, 1.0) * bump(r, 2.0, 8.0);
  }
  const double r0 = diagonalization_residual(0, ConeParams(1.0), ExtensionParam::sin0(), reg);
  MESSAGE("k=0 residual " << r0);
  CHECK(r0 < 1e-4);
}

TEST_CASE("diagonalization residual converges under refinement") {
  auto rho = std::make_shared<const SpectralGrid>(1e-3, 16.0, 1024);
  double prev = 0.0;
  for (std::size_t n : {384, 768, 1536}) {
    auto g = std::make_shared<const RadialGrid>(RadialGrid::standard(40.0, n));
    const auto p = bump_spinor(1, ConeParams(1.0), ExtensionParam::sin0(), g, 4.0);
    const double r = diagonalization_residual(1, ConeParams(1.0), ExtensionParam::sin0(), p, rho);
    MESSAGE("N " << n << " residual " << r);
    if (prev > 0.0) CHECK(prev / r > 4.0);
    prev = r;
  }
}
