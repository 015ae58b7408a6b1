#include "cone/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "cone/errors.hpp"

namespace cone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIt = 200000;

std::string fmt_args(const char* fn, double nu, double x) {
  std::ostringstream os;
  os.precision(17);
  os << fn << "(nu=" << nu << ", x=" << x << ")";
  return os.str();
}

// Steed's method (continued fractions CF1/CF2), valid for x >= 2.
// Returns J_nu(x); Y_nu(x) through *y when requested.
double steed_j(double nu, double x, double* y = nullptr) {
  const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / kPi;

  int isign = 1;
  double h = nu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * nu, d = 0.0, c = h;
  int i = 0;
  for (; i < kMaxIt; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  if (i >= kMaxIt) throw OverflowError(fmt_args("bessel_j: CF1 did not converge", nu, x));

  double rjl = isign * kFpMin, rjpl = h * rjl;
  const double rjl1 = rjl;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double a = 0.25 - xmu2, p = -0.5 * xi, q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact, ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den, di = -bi / den;
  double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 1; i < kMaxIt; ++i) {
    a += 2 * i;
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
  }
  if (i >= kMaxIt) throw OverflowError(fmt_args("bessel_j: CF2 did not converge", nu, x));

  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  if (y) {
    double rymu = rjmu * gam;
    const double rymup = rymu * (p + q / gam);
    double ry1 = xmu * xi * rymu - rymup;
    for (int l = 1; l <= nl; ++l) {
      const double rytemp = (xmu + l) * xi2 * ry1 - rymu;
      rymu = ry1;
      ry1 = rytemp;
    }
    *y = rymu;
  }
  return rjl1 * (rjmu / rjl);
}

// Temme's series (x < 2) or Steed's CF2 (x >= 2) for K_nu, nu >= 0.
double temme_steed_k(double nu, double x) {
  const int nl = static_cast<int>(nu + 0.5);
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x, xi2 = 2.0 * xi;

  double rkmu, rk1;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = xmu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;

    const double ap = boost::math::tgamma1pm1(xmu);
    const double am = boost::math::tgamma1pm1(-xmu);
    const double gampl = 1.0 / (1.0 + ap);
    const double gammi = 1.0 / (1.0 + am);
    const double gam1 = xmu == 0.0 ? -kEuler : (ap - am) / (2.0 * xmu * (1.0 + ap) * (1.0 + am));
    const double gam2 = 0.5 * (gammi + gampl);

    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    for (int i = 1; i < kMaxIt; ++i) {
      ff = (i * ff + p + q) / (i * i - xmu2);
      c *= d / i;
      p /= i - xmu;
      q /= i + xmu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    rkmu = sum;
    rk1 = sum1 * xi2;
  } else {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < kMaxIt; ++i) {
      a -= 2 * i;
      c = -a * c / (i + 1.0);
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    h = a1 * h;
    rkmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
    rk1 = rkmu * (xmu + x + 0.5 - h) * xi;
  }
  for (int i = 1; i <= nl; ++i) {
    const double rktemp = (xmu + i) * xi2 * rk1 + rkmu;
    rkmu = rk1;
    rk1 = rktemp;
  }
  return rkmu;
}

// log of exp(-x) I_nu(x) via the (positive-term) power series.
double log_i_scaled_series(double nu, double x) {
  double lp = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) - x;
  const double q = 0.25 * x * x;
  double t = 1.0, s = 1.0;
  for (int m = 1; m < 10 * kMaxIt; ++m) {
    t *= q / (m * (m + nu));
    s += t;
    if (t < 1e-17 * s) break;
    if (s > 1e280) {
      s *= 1e-280;
      t *= 1e-280;
      lp += 280.0 * std::numbers::ln10;
    }
  }
  return lp + std::log(s);
}

// exp(-x) I_nu(x) from the large-argument expansion; caller ensures x >= max(50, nu^2).
double i_scaled_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    const double next = -term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    if (std::abs(next) > std::abs(term) && k > 2) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

}  // namespace

Order::Order(double nu) : nu_(nu) {
  if (!(nu == -0.5 || nu >= 0.0) || !std::isfinite(nu)) {
    std::ostringstream os;
    os << "Bessel order " << nu << " outside {-1/2} U [0, inf)";
    throw DomainError(os.str());
  }
}

BesselJ::BesselJ(Order nu) : nu_(nu.value()) {
  lgamma1_ = std::lgamma(nu_ + 1.0);
  const double phase = (0.5 * nu_ + 0.25) * kPi;
  cos_phase_ = std::cos(phase);
  sin_phase_ = std::sin(phase);
  const double mu = 4.0 * nu_ * nu_;
  a_[0] = 1.0;
  n_a_ = 1;
  for (int k = 1; k < kTerms; ++k) {
    a_[k] = a_[k - 1] * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k);
    n_a_ = k + 1;
    if (a_[k] == 0.0) break;
  }
}

double BesselJ::series(double x) const {
  const double q = -0.25 * x * x;
  double t = 1.0, s = 1.0;
  for (int m = 1; m < 500; ++m) {
    t *= q / (m * (m + nu_));
    s += t;
    if (std::abs(t) < 1e-17 * std::abs(s) && m > 0.5 * x) break;
  }
  return std::exp(nu_ * std::log(0.5 * x) - lgamma1_) * s;
}

double BesselJ::asymptotic(double x, bool* converged) const {
  const double inv = 1.0 / x;
  double p = a_[0], q = 0.0, xk = 1.0, prev = 1.0;
  const bool terminating = a_[n_a_ - 1] == 0.0;
  *converged = terminating;
  for (int k = 1; k < n_a_; ++k) {
    xk *= inv;
    const double term = a_[k] * xk;
    const double mag = std::abs(term);
    if (k >= 8 && mag > prev && !terminating) break;
    const bool neg = ((k / 2) % 2) == 1;
    if (k % 2 == 0)
      p += neg ? -term : term;
    else
      q += neg ? -term : term;
    if (k >= 8 && mag < 1e-17) {
      *converged = true;
      break;
    }
    prev = mag;
  }
  const double s = std::sin(x), c = std::cos(x);
  const double cchi = c * cos_phase_ + s * sin_phase_;
  const double schi = s * cos_phase_ - c * sin_phase_;
  return std::sqrt(2.0 / (kPi * x)) * (p * cchi - q * schi);
}

double BesselJ::operator()(double x) const {
  if (!(x >= 0.0)) throw DomainError(fmt_args("bessel_j: negative argument", nu_, x));
  if (x > kMaxBesselArgument) throw OverflowError(fmt_args("bessel_j: argument beyond supported range", nu_, x));
  if (nu_ == -0.5) {
    if (x == 0.0) throw DomainError(fmt_args("bessel_j: J_{-1/2} is singular at 0", nu_, x));
    return std::sqrt(2.0 / (kPi * x)) * std::cos(x);
  }
  if (x == 0.0) return nu_ == 0.0 ? 1.0 : 0.0;
  if (nu_ == 0.5) return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
  if (x <= 6.0 || x * x <= 23.0 * (nu_ + 1.0)) return series(x);
  if (x >= std::max(20.0, 0.125 * nu_ * nu_)) {
    bool ok = false;
    const double v = asymptotic(x, &ok);
    if (ok) return v;
  }
  return steed_j(nu_, x);
}

double bessel_j(Order nu, double x) { return BesselJ(nu)(x); }

double bessel_k(Order nu, double x) {
  const double v = nu.value();
  if (v < 0.0) throw DomainError(fmt_args("bessel_k: negative order", v, x));
  if (!(x > 0.0)) throw DomainError(fmt_args("bessel_k: argument must be positive", v, x));
  if (v == 0.5) return std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
  return temme_steed_k(v, x);
}

double bessel_i_scaled(Order nu, double x) {
  const double v = nu.value();
  if (v < 0.0) throw DomainError(fmt_args("bessel_i: negative order", v, x));
  if (!(x >= 0.0)) throw DomainError(fmt_args("bessel_i: negative argument", v, x));
  if (x == 0.0) return v == 0.0 ? 1.0 : 0.0;
  if (x >= std::max(50.0, v * v)) return i_scaled_asymptotic(v, x);
  return std::exp(log_i_scaled_series(v, x));
}

double bessel_i(Order nu, double x) {
  if (x > 700.0) throw OverflowError(fmt_args("bessel_i: result overflows", nu.value(), x));
  const double s = bessel_i_scaled(nu, x);
  return x == 0.0 ? s : s * std::exp(x);
}

std::complex<double> bessel_i(Order nu, std::complex<double> z) {
  const double v = nu.value();
  if (z.imag() == 0.0 && z.real() >= 0.0) return {bessel_i(nu, z.real()), 0.0};
  if (z.real() == 0.0) {
    // I_nu(e^{-+i pi/2} w) = e^{-+i nu pi/2} J_nu(w), w > 0
    const double w = std::abs(z.imag());
    const double sgn = z.imag() < 0.0 ? -1.0 : 1.0;
    return std::polar(1.0, sgn * v * kPi / 2.0) * bessel_j(nu, w);
  }
  std::ostringstream os;
  os.precision(17);
  os << "bessel_i: argument " << z << " is off the supported rays";
  throw UnsupportedArgument(os.str());
}

}  // namespace cone
