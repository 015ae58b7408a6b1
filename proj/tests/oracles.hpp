#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

// Power series for J_nu in long double, fixed term count.
inline double series_j(double nu, double x, int terms = 40) {
  long double s = 0.0L;
  const long double h = 0.5L * x;
  for (int m = 0; m < terms; ++m) {
    long double lt = (nu + 2.0L * m) * std::log(h) - std::lgamma(m + 1.0L) - std::lgamma(nu + m + 1.0L);
    long double t = std::exp(lt);
    s += (m % 2 == 0) ? t : -t;
  }
  return static_cast<double>(s);
}

// Power series for I_nu (all terms positive).
inline double series_i(double nu, double x, int terms = 80) {
  long double s = 0.0L;
  const long double h = 0.5L * x;
  for (int m = 0; m < terms; ++m)
    s += std::exp((nu + 2.0L * m) * std::log(h) - std::lgamma(m + 1.0L) - std::lgamma(nu + m + 1.0L));
  return static_cast<double>(s);
}

// d/dx J_nu by differentiating the series termwise.
inline double series_j_prime(double nu, double x, int terms = 40) {
  long double s = 0.0L;
  const long double h = 0.5L * x;
  for (int m = 0; m < terms; ++m) {
    const long double p = nu + 2.0L * m;
    long double lt = (p - 1.0L) * std::log(h) - std::lgamma(m + 1.0L) - std::lgamma(nu + m + 1.0L);
    long double t = 0.5L * p * std::exp(lt);
    s += (m % 2 == 0) ? t : -t;
  }
  return static_cast<double>(s);
}

// K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt by adaptive Gauss-Kronrod.
inline double quad_k(double nu, double x) {
  auto f = [&](double t) {
    if (t > 700.0) return 0.0;
    return 0.5 * (std::exp(nu * t - x * std::cosh(t)) + std::exp(-nu * t - x * std::cosh(t)));
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(), 15,
                                                                       1e-14);
}

// I_nu(x) = (1/pi) int_0^pi e^{x cos t} cos(nu t) dt - sin(nu pi)/pi int_0^inf e^{-x cosh t - nu t} dt
inline double quad_i(double nu, double x) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double pi = 3.14159265358979323846;
  auto f1 = [&](double t) { return std::exp(x * std::cos(t)) * std::cos(nu * t); };
  auto f2 = [&](double t) { return t > 700.0 ? 0.0 : std::exp(-x * std::cosh(t) - nu * t); };
  return GK::integrate(f1, 0.0, pi, 15, 1e-14) / pi -
         std::sin(nu * pi) / pi * GK::integrate(f2, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-14);
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace oracle
