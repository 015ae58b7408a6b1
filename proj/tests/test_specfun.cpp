#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "cone/errors.hpp"
#include "cone/specfun.hpp"
#include "oracles.hpp"

using namespace cone;
using std::numbers::pi;

TEST_CASE("half-integer zeros") {
  CHECK(std::abs(bessel_j(Order(0.5), pi)) < 1e-15);
  CHECK(std::abs(bessel_j(Order(-0.5), pi / 2)) < 1e-15);
}

TEST_CASE("J_3/2(1) against the power series") {
  CHECK(oracle::rel(bessel_j(Order(1.5), 1.0), oracle::series_j(1.5, 1.0)) < 1e-12);
}

TEST_CASE("order validation") {
  CHECK_THROWS_AS(Order(-0.3), DomainError);
  CHECK_THROWS_AS(Order(-1.0), DomainError);
  CHECK_NOTHROW(Order(-0.5));
  CHECK_THROWS_AS(bessel_j(Order(-0.5), 0.0), DomainError);
  CHECK_THROWS_AS(bessel_j(Order(1.0), -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(Order(1.0), 2 * kMaxBesselArgument), OverflowError);
  CHECK(bessel_j(Order(0.0), 0.0) == 1.0);
  CHECK(bessel_j(Order(2.0), 0.0) == 0.0);
}

TEST_CASE("half-integer closed forms on [0.1, 50]") {
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = 0.1 * std::pow(500.0, i / 400.0);
    const double c = std::sqrt(2.0 / (pi * x));
    const double s = std::sin(x), co = std::cos(x);
    const double ref[4] = {c * co, c * s, c * (s / x - co), c * ((3.0 / (x * x) - 1.0) * s - 3.0 * co / x)};
    const double nus[4] = {-0.5, 0.5, 1.5, 2.5};
    for (int m = 0; m < 4; ++m) {
      const double v = bessel_j(Order(nus[m]), x);
      // Relative to the local envelope, as the closed forms have zeros.
      worst = std::max(worst, std::abs(v - ref[m]) / std::max(std::abs(ref[m]), c * std::pow(std::min(x, 1.0), nus[m] + 0.5) * 1e-2));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("J_nu sweep against Boost across all evaluation regions") {
  const double nus[] = {0.0, 0.5, 1.0 / 3.0, 1.2, 2.5, 3.7, 7.5, 10.0 / 0.4 + 0.5, 40.5, 80.25};
  double worst = 0.0;
  for (double nu : nus)
    for (int i = 0; i <= 600; ++i) {
      const double x = 1e-3 * std::pow(1e7, i / 600.0);
      if (x > 1e4) continue;
      const double ref = boost::math::cyl_bessel_j(nu, x);
      const double v = bessel_j(Order(nu), x);
      // Envelope: the local amplitude of J_nu, avoiding zeros.
      const double env = std::max(std::abs(ref), 1e-3 * std::sqrt(2.0 / (pi * std::max(x, nu + 1.0))));
      if (x < nu && std::abs(ref) < 1e-250) continue;
      worst = std::max(worst, std::abs(v - ref) / env);
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("J_nu near the series / continued-fraction / asymptotic crossovers") {
  for (double nu : {0.5, 3.5, 6.0, 12.0}) {
    for (double x : {11.9, 12.1, 19.9, 20.1, nu * nu / 2 - 0.1, nu * nu / 2 + 0.1}) {
      if (x <= 0) continue;
      const double ref = boost::math::cyl_bessel_j(nu, x);
      CHECK(std::abs(bessel_j(Order(nu), x) - ref) < 1e-11 * std::max(1.0, std::abs(ref)) + 1e-10 * std::abs(ref));
    }
  }
}

TEST_CASE("BesselJ functor matches the free function") {
  BesselJ j(Order(2.25));
  for (double x : {0.01, 1.0, 17.0, 300.0}) CHECK(j(x) == bessel_j(Order(2.25), x));
}

TEST_CASE("bound |J_nu(x)| <= 2 (1 + x^{-nu_-})") {
  for (double nu : {-0.5, 0.0, 0.5, 1.5, 4.0})
    for (int i = 0; i <= 200; ++i) {
      const double x = 1e-4 * std::pow(1e8, i / 200.0);
      const double num = std::max(0.0, -nu);
      CHECK(std::abs(bessel_j(Order(nu), x)) <= 2.0 * (1.0 + std::pow(x, -num)));
    }
}

TEST_CASE("K_1/2 closed form") {
  CHECK(oracle::rel(bessel_k(Order(0.5), 1.0), std::sqrt(pi / 2) * std::exp(-1.0)) < 1e-12);
  CHECK(oracle::rel(bessel_k(Order(0.5), 2.0) / bessel_k(Order(0.5), 1.0), std::exp(-1.0) / std::sqrt(2.0)) < 1e-12);
  for (double x : {1e-3, 0.3, 5.0, 40.0})
    CHECK(oracle::rel(bessel_k(Order(0.5), x), std::sqrt(pi / (2 * x)) * std::exp(-x)) < 1e-12);
  CHECK_THROWS_AS(bessel_k(Order(0.5), 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(Order(-0.5), 1.0), DomainError);
}

TEST_CASE("K_nu against its integral representation") {
  CHECK(oracle::rel(bessel_k(Order(1.5), 0.7), oracle::quad_k(1.5, 0.7)) < 1e-10);
  for (double nu : {0.0, 0.25, 1.0, 2.5, 4.2})
    for (double x : {0.05, 0.9, 1.99, 2.01, 6.0, 30.0}) CHECK(oracle::rel(bessel_k(Order(nu), x), oracle::quad_k(nu, x)) < 1e-10);
}

TEST_CASE("I_nu real argument") {
  CHECK(oracle::rel(bessel_i(Order(0.5), 1.0), std::sqrt(2 / pi) * std::sinh(1.0)) < 1e-12);
  CHECK(bessel_i(Order(0.0), 0.0) == 1.0);
  for (double nu : {0.0, 0.5, 1.3, 3.5})
    for (double x : {0.01, 1.0, 8.0, 40.0, 60.0, 200.0}) {
      const double ref = x < 10 ? oracle::series_i(nu, x) : x < 100 ? oracle::quad_i(nu, x) : boost::math::cyl_bessel_i(nu, x);
      CHECK(oracle::rel(bessel_i(Order(nu), x), ref) < 1e-10);
      CHECK(oracle::rel(bessel_i_scaled(Order(nu), x), ref * std::exp(-x)) < 1e-10);
    }
  CHECK(std::isfinite(bessel_i_scaled(Order(2.0), 1e5)));
  CHECK_THROWS_AS(bessel_i(Order(0.0), 800.0), OverflowError);
}

TEST_CASE("I_nu on the imaginary axis") {
  using C = std::complex<double>;
  const C v = bessel_i(Order(1.0), C(0.0, -2.0));
  const C ref = std::polar(1.0, -pi / 2) * oracle::series_j(1.0, 2.0);
  CHECK(oracle::rel(v, ref) < 1e-12);
  const C w = bessel_i(Order(0.7), C(0.0, 3.0));
  CHECK(oracle::rel(w, std::polar(1.0, 0.35 * pi) * oracle::series_j(0.7, 3.0)) < 1e-12);
  CHECK(oracle::rel(bessel_i(Order(1.5), C(2.0, 0.0)), C(oracle::quad_i(1.5, 2.0))) < 1e-10);
  CHECK_THROWS_AS(bessel_i(Order(1.0), C(1.0, 1.0)), UnsupportedArgument);
  CHECK_THROWS_AS(bessel_i(Order(1.0), C(-1.0, 0.0)), UnsupportedArgument);
}

TEST_CASE("Wronskian I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x") {
  for (double nu : {0.0, 0.5, 1.5})
    for (int i = 0; i <= 40; ++i) {
      const double x = 0.5 + 19.5 * i / 40.0;
      const double w = bessel_i(Order(nu), x) * bessel_k(Order(nu + 1), x) +
                       bessel_i(Order(nu + 1), x) * bessel_k(Order(nu), x);
      CHECK(oracle::rel(w, 1.0 / x) < 1e-9);
    }
}

TEST_CASE("recurrence (d/dx + nu/x) K_nu = -K_{nu-1}") {
  for (double nu : {1.0, 1.5, 2.7})
    for (double x : {0.3, 1.0, 2.0, 5.0, 12.0}) {
      const double h = 1e-3 * x;
      auto k = [&](double y) { return bessel_k(Order(nu), y); };
      const double d = (k(x - 2 * h) - 8 * k(x - h) + 8 * k(x + h) - k(x + 2 * h)) / (12 * h);
      CHECK(oracle::rel(d + nu / x * bessel_k(Order(nu), x), -bessel_k(Order(nu - 1), x)) < 1e-6);
    }
}
