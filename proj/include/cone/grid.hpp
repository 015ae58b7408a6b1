#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace cone {

using cplx = std::complex<double>;

// Geometric grid x_i = x_min e^{i h}. Weights integrate g(x) x dx by the
// trapezoid rule in u = ln x (Jacobian x^2).
class LogGrid {
public:
  LogGrid(double x_min, double x_max, std::size_t n);

  std::size_t size() const { return x_.size(); }
  double operator[](std::size_t i) const { return x_[i]; }
  const std::vector<double>& points() const { return x_; }
  const std::vector<double>& weights() const { return w_; }
  double min() const { return x_.front(); }
  double max() const { return x_.back(); }
  double log_step() const { return h_; }

  // Weights with the segment (0, x_1) added for an integrand g x^2 ~ x^a near 0.
  std::vector<double> tail_weights(double a) const;

  // Integral of g(x) x dx over (0, x_max]; the part below x_1 is estimated
  // from the power law seen at the two innermost nodes.
  double integrate(std::span<const double> g) const;
  cplx integrate(std::span<const cplx> g) const;

private:
  double h_;
  std::vector<double> x_, w_;
};

class RadialGrid : public LogGrid {
public:
  using LogGrid::LogGrid;
  // [1e-4 R, R] with n nodes.
  static RadialGrid standard(double R = 40.0, std::size_t n = 4096);
};

// Positive energies |rho|; every node stands for the pair +rho, -rho.
class SpectralGrid : public LogGrid {
public:
  using LogGrid::LogGrid;
  static SpectralGrid standard(double rho_min = 1e-3, double rho_max = 64.0, std::size_t n = 2048);
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;
using SpectralGridPtr = std::shared_ptr<const SpectralGrid>;

// Equispaced theta_m = -pi sigma + 2 pi sigma m / M.
class AngularGrid {
public:
  AngularGrid(double sigma, std::size_t m);
  std::size_t size() const { return theta_.size(); }
  double operator[](std::size_t i) const { return theta_[i]; }
  double weight() const { return weight_; }
  double sigma() const { return sigma_; }

private:
  double sigma_, weight_;
  std::vector<double> theta_;
};

}  // namespace cone
