#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "cone/eigenbasis.hpp"
#include "cone/specfun.hpp"
#include "oracles.hpp"

using namespace cone;
using std::numbers::pi;

namespace {

RadialGridPtr make_grid(double R, std::size_t n) { return std::make_shared<const RadialGrid>(RadialGrid::standard(R, n)); }

double bump(double r, double a, double b) {
  if (r <= a || r >= b) return 0.0;
  const double y = (2.0 * r - a - b) / (b - a);
  return std::exp(-1.0 / (1.0 - y * y));
}

// Discrete L^2(r dr) norm over nodes [lo, hi).
double interior_norm(const RadialGrid& g, const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t lo,
                     std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += g.weights()[i] * (std::norm(a[i]) + std::norm(b[i]));
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("cone and grid validation") {
  CHECK_THROWS_AS(ConeParams(0.0), ValidationError);
  CHECK_THROWS_AS(ConeParams(1.5), ValidationError);
  try {
    ConeParams c(1.5);
  } catch (const ValidationError& e) {
    CHECK(e.field() == "sigma");
  }
  CHECK_NOTHROW(ConeParams(1.0));
  CHECK_THROWS_AS(RadialGrid(1.0, 0.5, 100), ValidationError);
}

TEST_CASE("radial quadrature reproduces r^a e^{-r} moments") {
  const RadialGrid g(1e-3, 60.0, 4096);
  for (int a = 0; a <= 2; ++a) {
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::pow(g[i], a) * std::exp(-g[i]);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights()[i] * f[i];
    // int_{r1}^{rN} r^{a+1} e^{-r} dr = Gamma(a+2) minus the two incomplete tails.
    const double r1 = g.min(), rn = g.max();
    auto lower = [&](double x) {  // int_0^x r^{a+1} e^{-r} dr by series
      double t = std::pow(x, a + 2) / (a + 2), sum = 0.0;
      for (int m = 0; m < 30; ++m) {
        sum += t;
        t *= -x * (a + 2 + m) / ((m + 1.0) * (a + 3 + m));
      }
      return sum;
    };
    const double gam = std::tgamma(a + 2.0);
    const double upper_tail = std::exp(-rn) * std::pow(rn, a + 1) * 1.5;  // negligible at rn = 60
    const double ref = gam - lower(r1);
    CHECK(upper_tail < 1e-20);
    CHECK(std::abs(s - ref) / ref < 1e-8);
  }
}

TEST_CASE("angular eigenpairs") {
  const auto e0 = angular_eigen(0, ConeParams(0.6), 0.3);
  CHECK(e0.eigenvalue == 0.0);
  CHECK(std::abs(e0.harmonic[0] - 1.0 / std::sqrt(2 * pi * 0.6)) < 1e-15);
  CHECK(std::abs(e0.harmonic[1] - 1.0 / std::sqrt(2 * pi * 0.6)) < 1e-15);
  const auto e3 = angular_eigen(3, ConeParams(0.5), 0.0);
  CHECK(e3.eigenvalue == 6.0);
  CHECK(std::abs(e3.harmonic[0] - 1.0 / std::sqrt(pi)) < 1e-15);
  const auto e1 = angular_eigen(1, ConeParams(1.0), pi);
  CHECK(e1.eigenvalue == 1.0);
  CHECK(std::abs(e1.harmonic[0] * std::sqrt(2 * pi) - cplx(-1.0)) < 1e-15);
}

TEST_CASE("decompose / synthesize") {
  const ConeParams cone(0.7);
  auto grid = make_grid(10.0, 256);
  const int K = 4;
  const std::size_t M = min_angular_nodes(K);
  CHECK(M == 17);

  SUBCASE("constant field lives on k = 0") {
    SpinorField f(cone, grid, M);
    for (std::size_t i = 0; i < grid->size(); ++i)
      for (std::size_t j = 0; j < M; ++j) f.at(i, j) = {cplx(std::exp(-(*grid)[i])), cplx(0.0, 2.0)};
    const auto s = decompose(f, K);
    for (const auto& [k, p] : s.modes)
      if (k != 0) CHECK(p.norm() < 1e-13 * f.norm());
  }

  SUBCASE("single harmonic times g(r)") {
    SpinorField f(cone, grid, M);
    const auto ang = f.angles();
    for (std::size_t i = 0; i < grid->size(); ++i)
      for (std::size_t j = 0; j < M; ++j) {
        const cplx h = angular_eigen(2, cone, ang[j]).harmonic[0];
        const double g = (*grid)[i] * std::exp(-(*grid)[i]);
        f.at(i, j) = {g * h, 0.5 * g * h};
      }
    const auto s = decompose(f, K);
    for (const auto& [k, p] : s.modes) {
      if (k == 2) {
        for (std::size_t i = 0; i < grid->size(); ++i) {
          const double g = (*grid)[i] * std::exp(-(*grid)[i]);
          CHECK(std::abs(p.upper[i] - g) < 1e-13);
          CHECK(std::abs(p.lower[i] - 0.5 * g) < 1e-13);
        }
      } else {
        CHECK(p.norm() < 1e-13);
      }
    }
  }

  SUBCASE("Parseval and round trip on random band-limited fields") {
    std::mt19937 rng(7);
    std::normal_distribution<double> nd;
    ModeSpectrum spec(cone, grid, K);
    for (int k = -K; k <= K; ++k) {
      SpinorProfile p(k, grid);
      const double a = nd(rng), b = nd(rng), c = nd(rng), d = nd(rng), w = 0.5 + std::abs(nd(rng));
      for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = (*grid)[i];
        const double env = r * r * std::exp(-w * r * r);
        p.upper[i] = cplx(a, b) * env;
        p.lower[i] = cplx(c, d) * env * r;
      }
      spec.set(p);
    }
    const SpinorField f = synthesize(spec, M + 3);
    // Direct 2-D quadrature of |f|^2 with the plain grid weights.
    double direct = 0.0;
    const double wt = 2 * pi * cone.sigma() / f.m;
    for (std::size_t i = 0; i < grid->size(); ++i)
      for (std::size_t j = 0; j < f.m; ++j)
        direct += grid->weights()[i] * wt * (std::norm(f.at(i, j)[0]) + std::norm(f.at(i, j)[1]));
    double modal = 0.0;
    for (const auto& [k, p] : spec.modes) modal += interior_norm(*grid, p.upper, p.lower, 0, grid->size()) * interior_norm(*grid, p.upper, p.lower, 0, grid->size());
    CHECK(std::abs(direct - modal) / modal < 1e-10);

    const auto back = decompose(f, K);
    double err = 0.0;
    for (const auto& [k, p] : spec.modes) err = std::max(err, (back.modes.at(k) - p).norm() / spec.norm());
    CHECK(err < 1e-12);
    const auto f2 = synthesize(back, f.m);
    double ferr = 0.0;
    for (std::size_t n = 0; n < f.values.size(); ++n)
      ferr = std::max(ferr, std::abs(f2.values[n][0] - f.values[n][0]) + std::abs(f2.values[n][1] - f.values[n][1]));
    CHECK(ferr < 1e-10);
  }

  SUBCASE("resolution gate") {
    SpinorField f(cone, grid, 4 * K);
    CHECK_THROWS_AS(decompose(f, K), ResolutionError);
    ModeSpectrum s(cone, grid, K);
    CHECK_THROWS_AS(synthesize(s, 4 * K), ResolutionError);
  }
}

TEST_CASE("projections") {
  const ConeParams cone(0.5);
  auto grid = make_grid(5.0, 64);
  ModeSpectrum s(cone, grid, 3);
  for (int k = -3; k <= 3; ++k) {
    SpinorProfile p(k, grid);
    for (std::size_t i = 0; i < grid->size(); ++i) p.upper[i] = cplx(k + 0.5, 1.0) * std::exp(-(*grid)[i]);
    s.set(p);
  }
  const auto p0 = project(s, Projection::P0);
  const auto pp = project(s, Projection::Pperp);
  CHECK(project(pp, Projection::P0).modes.empty());
  CHECK(project(p0, Projection::P0).modes.size() == p0.modes.size());
  const auto gt = project(s, Projection::Pgt), lt = project(s, Projection::Plt);
  CHECK(gt.modes.size() + lt.modes.size() == pp.modes.size());
  for (const auto& [k, p] : pp.modes) {
    const auto* q = k > 0 ? gt.find(k) : lt.find(k);
    REQUIRE(q != nullptr);
    CHECK(q->upper == p.upper);
  }
  const double n0 = p0.norm(), np = pp.norm(), n = s.norm();
  CHECK(std::abs(n0 * n0 + np * np - n * n) < 1e-14 * n * n);
}

TEST_CASE("apply_dmu on exact data") {
  const RadialGrid g(1e-2, 10.0, 4096);
  std::vector<cplx> f(g.size()), inv(g.size()), j(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = g[i];
    inv[i] = 1.0 / g[i];
    j[i] = bessel_j(Order(0.5), g[i]);
  }
  const auto d0 = apply_dmu(0.0, g, f);
  const auto d1 = apply_dmu(1.0, g, inv);
  const auto dj = apply_dmu(0.5, g, j);
  double e0 = 0, e1 = 0, ej = 0;
  for (std::size_t i = 2; i + 2 < g.size(); ++i) {
    e0 = std::max(e0, std::abs(d0[i] - 1.0));
    e1 = std::max(e1, std::abs(d1[i]));
    const double ref = oracle::series_j_prime(0.5, g[i]) + 0.5 / g[i] * oracle::series_j(0.5, g[i]);
    ej = std::max(ej, std::abs(dj[i] - ref) / std::max(1.0, std::abs(ref)));
  }
  // f = r and f = 1/r are exponentials in ln r; the error is the O(h^4) truncation.
  CHECK(e0 < 1e-10);
  CHECK(e1 < 1e-8);
  CHECK(ej < 1e-6);

  Diagnostics diag;
  const RadialGrid coarse(1e-2, 200.0, 64);
  std::vector<cplx> osc(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) osc[i] = std::sin(coarse[i]);
  apply_dmu(0.0, coarse, osc, &diag);
  CHECK(!diag.empty());
}

TEST_CASE("generalized eigenfunctions") {
  const ConeParams c1(1.0);
  const auto s = generalized_eigenfunction(1, c1, ExtensionParam::sin0(), 1.0, 2.3);
  CHECK(std::abs(s[0] - oracle::series_j(1.5, 2.3) / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(s[1] - oracle::series_j(0.5, 2.3) / std::sqrt(2.0)) < 1e-14);
  const auto z = generalized_eigenfunction(0, c1, ExtensionParam::sin0(), 1.0, 0.8);
  CHECK(std::abs(z[0] - oracle::series_j(-0.5, 0.8) / std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(z[1] + oracle::series_j(0.5, 0.8) / std::sqrt(2.0)) < 1e-14);
  for (int k : {-2, 0, 3}) {
    const auto p = generalized_eigenfunction(k, ConeParams(0.7), ExtensionParam::cos0(), 1.7, 1.1);
    const auto m = generalized_eigenfunction(k, ConeParams(0.7), ExtensionParam::cos0(), -1.7, 1.1);
    CHECK(p[0] == m[0]);
    CHECK(p[1] == -m[1]);
  }
  CHECK_THROWS_AS(generalized_eigenfunction(0, c1, ExtensionParam(pi / 4), 1.0, 1.0), AdmissibilityError);
  CHECK_THROWS_AS(generalized_eigenfunction(1, c1, ExtensionParam::sin0(), 0.0, 1.0), DomainError);
}

TEST_CASE("apply_dk: zero and eigen-residual") {
  auto grid = make_grid(40.0, 16384);
  SpinorProfile zero(1, grid);
  CHECK(apply_dk(1, ConeParams(1.0), zero).norm() == 0.0);

  const std::size_t lo = 2, hi = grid->size() - 2;
  double worst = 0.0;
  for (int k : {-2, -1, 0, 1, 2})
    for (double sigma : {0.4, 0.7, 1.0})
      for (double rho : {0.5, 1.0, 2.0})
        for (auto gamma : {ExtensionParam::sin0(), ExtensionParam::cos0()}) {
          const ConeParams cone(sigma);
          const auto p = generalized_eigenfunction_profile(k, cone, gamma, rho, grid);
          const auto d = apply_dk(k, cone, p);
          const auto res = d - cplx(rho) * p;
          worst = std::max(worst, interior_norm(*grid, res.upper, res.lower, lo, hi) /
                                      interior_norm(*grid, p.upper, p.lower, lo, hi));
        }
  MESSAGE("worst eigen-residual " << worst);
  CHECK(worst < 1e-6);
}

TEST_CASE("apply_dk is symmetric on interior bumps") {
  auto grid = make_grid(20.0, 8192);
  const ConeParams cone(0.7);
  SpinorProfile u(1, grid), v(1, grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = (*grid)[i];
    u.upper[i] = bump(r, 1.0, 3.0);
    u.lower[i] = cplx(0.0, 1.0) * bump(r, 1.5, 4.0);
    v.upper[i] = cplx(1.0, -0.5) * bump(r, 0.5, 2.5);
    v.lower[i] = r * bump(r, 1.0, 5.0);
  }
  const cplx lhs = inner(apply_dk(1, cone, u), v);
  const cplx rhs = inner(u, apply_dk(1, cone, v));
  CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(lhs));
}
