#include "cone/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cone/errors.hpp"

namespace cone {

namespace {

template <class T>
T tail_integral(const LogGrid& g, std::span<const T> vals) {
  const double h = g.log_step();
  const T g0 = vals[0] * g[0] * g[0];
  const T g1 = vals[1] * g[1] * g[1];
  const double m0 = std::abs(g0), m1 = std::abs(g1);
  if (m0 == 0.0 || m1 == 0.0) return T{};
  const double a = std::log(m1 / m0) / h;
  if (!(a > 0.05)) return T{};
  return g0 * (h * (1.0 / (-std::expm1(-a * h)) - 0.5));
}

template <class T>
T integrate_impl(const LogGrid& g, std::span<const T> vals) {
  if (vals.size() != g.size()) throw std::invalid_argument("integrate: size mismatch with grid");
  T s{};
  const auto& w = g.weights();
  for (std::size_t i = 0; i < vals.size(); ++i) s += w[i] * vals[i];
  return s + tail_integral(g, vals);
}

}  // namespace

LogGrid::LogGrid(double x_min, double x_max, std::size_t n) {
  if (!(x_min > 0.0 && x_max > x_min) || n < 8) {
    std::ostringstream os;
    os << "log grid needs 0 < x_min < x_max and n >= 8, got [" << x_min << ", " << x_max << "], n = " << n;
    throw ValidationError("radial_grid", os.str());
  }
  h_ = std::log(x_max / x_min) / static_cast<double>(n - 1);
  x_.resize(n);
  w_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x_[i] = x_min * std::exp(h_ * static_cast<double>(i));
    w_[i] = h_ * x_[i] * x_[i];
  }
  x_.back() = x_max;
  w_.back() = h_ * x_max * x_max;
  w_.front() *= 0.5;
  w_.back() *= 0.5;
}

std::vector<double> LogGrid::tail_weights(double a) const {
  std::vector<double> w = w_;
  if (a > 0.0) w[0] = h_ * x_[0] * x_[0] / (-std::expm1(-a * h_));
  return w;
}

double LogGrid::integrate(std::span<const double> g) const { return integrate_impl(*this, g); }
cplx LogGrid::integrate(std::span<const cplx> g) const { return integrate_impl(*this, g); }

RadialGrid RadialGrid::standard(double R, std::size_t n) { return RadialGrid(1e-4 * R, R, n); }

SpectralGrid SpectralGrid::standard(double rho_min, double rho_max, std::size_t n) {
  return SpectralGrid(rho_min, rho_max, n);
}

AngularGrid::AngularGrid(double sigma, std::size_t m) : sigma_(sigma) {
  if (m == 0) throw ResolutionError("angular grid needs at least one node");
  const double len = 2.0 * std::numbers::pi * sigma;
  weight_ = len / static_cast<double>(m);
  theta_.resize(m);
  for (std::size_t i = 0; i < m; ++i) theta_[i] = -std::numbers::pi * sigma + weight_ * static_cast<double>(i);
}

}  // namespace cone
