#pragma once

#include <array>
#include <complex>

namespace cone {

// Bessel order. Admissible values are -1/2 and [0, inf).
class Order {
public:
  explicit Order(double nu);
  double value() const { return nu_; }
  bool is_minus_half() const { return nu_ == -0.5; }

private:
  double nu_;
};

inline constexpr double kMaxBesselArgument = 1e7;

// J_nu with the order-dependent constants precomputed; used in the quadrature
// loops where the same order is evaluated millions of times.
class BesselJ {
public:
  explicit BesselJ(Order nu);
  double operator()(double x) const;
  double order() const { return nu_; }

private:
  static constexpr int kTerms = 64;

  double series(double x) const;
  double asymptotic(double x, bool* converged) const;

  double nu_;
  double lgamma1_;  // log Gamma(nu + 1)
  double cos_phase_, sin_phase_;
  std::array<double, kTerms> a_{};  // Hankel amplitude coefficients a_k(nu)
  int n_a_ = 0;
};

double bessel_j(Order nu, double x);

// K_nu for nu >= 0, x > 0.
double bessel_k(Order nu, double x);

// I_nu on the positive real axis.
double bessel_i(Order nu, double x);

// exp(-x) I_nu(x); stays finite for large x.
double bessel_i_scaled(Order nu, double x);

// I_nu(z) for z on the positive real axis or on the imaginary axis.
std::complex<double> bessel_i(Order nu, std::complex<double> z);

}  // namespace cone
