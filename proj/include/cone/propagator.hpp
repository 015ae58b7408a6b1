#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cone/eigenbasis.hpp"
#include "cone/extension.hpp"
#include "cone/hankel.hpp"
#include "cone/quadrature.hpp"

namespace cone {

// Littlewood-Paley band phi(2^-j lambda). phi(lambda) = beta(x + 1) - beta(x),
// x = log2 lambda, with beta the smooth step from 0 (x <= 0) to 1 (x >= 1):
// supp phi = [1/2, 2], phi(1) = 1, and sum_j phi(2^-j lambda) = 1 exactly.
class DyadicBand {
public:
  explicit DyadicBand(int j) : j_(j) {}
  int j() const { return j_; }
  double scale() const;  // 2^j
  double lower() const { return 0.5 * scale(); }
  double upper() const { return 2.0 * scale(); }

  double operator()(double lambda) const;  // phi(2^-j |lambda|)
  double enlarged(double lambda) const;    // phi~(2^-j |lambda|), supp [1/4, 4], phi~ phi = phi

  static double step(double x);
  static double phi(double lambda);
  static double phi_tilde(double lambda);

private:
  int j_;
};

// GL nodes on the band [2^{j-1}, 2^{j+1}] fine enough for phase rates up to |t| + r_max + s_max.
QuadratureRule band_rule(const DyadicBand& band, double t, double r_max, double s_max);

// int_0^inf e^{-i t rho} J_nu(r rho) J_nu(s rho) phi(2^-j rho) rho drho
cplx m_nu_localized(Order nu, const DyadicBand& band, double t, double r, double s, Diagnostics* diag = nullptr);

struct KernelOrders {
  double upper, lower;
};

// Bessel orders of the diagonal kernel entries of mode k.
KernelOrders kernel_orders(int k, const ConeParams& cone, const ExtensionParam& gamma);

struct KernelMatrix {
  double t = 0.0;
  int k = 0;
  int j = 0;
  KernelOrders orders{};
  std::vector<double> points;      // r_a = s_a
  std::vector<cplx> upper, lower;  // row-major n x n; off-diagonal blocks are identically zero

  std::size_t size() const { return points.size(); }
  cplx upper_at(std::size_t a, std::size_t b) const { return upper[a * size() + b]; }
  cplx lower_at(std::size_t a, std::size_t b) const { return lower[a * size() + b]; }
};

KernelMatrix mode_kernel(int k, const ConeParams& cone, const ExtensionParam& gamma, const DyadicBand& band, double t,
                         std::span<const double> points);

// (K p)(r_a) = sum_b K(r_a, s_b) p(s_b) w_b on the profile's grid, with the same power-law inner segment as the
// Hankel transforms. The kernel must be built on the profile's grid points.
SpinorProfile apply_kernel_matrix(const KernelMatrix& kmat, const SpinorProfile& p);

// T_j p: the localized kernel applied through the factored form (forward transform at the band nodes, multiply,
// back-transform), i.e. the same quadrature as mode_kernel without forming the matrix.
SpinorProfile apply_localized_kernel(const DyadicBand& band, int k, const ConeParams& cone, const ExtensionParam& gamma,
                                     double t, const SpinorProfile& p);

// Per component H_nu m(rho) H_nu with the scalar Hankel plans (rho >= 0 only).
SpinorProfile scalar_multiplier(int k, const ConeParams& cone, const ExtensionParam& gamma, const SpinorProfile& p,
                                const std::function<cplx(double)>& m, const SpectralGridPtr& rho = default_spectral_grid());

// e^{-itD} per mode via the relativistic transform with signed rho.
ModeSpectrum evolve(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma, double t,
                    const SpectralGridPtr& rho = default_spectral_grid(), Diagnostics* diag = nullptr);

// e^{-it sqrt(H)} per mode and component from the scalar Hankel diagonalization.
ModeSpectrum half_wave(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma, double t,
                       const SpectralGridPtr& rho = default_spectral_grid());

// Multiplies the signed energy density of every mode by m(rho).
ModeSpectrum spectral_multiplier(const ModeSpectrum& spec, const ConeParams& cone, const ExtensionParam& gamma,
                                 const std::function<cplx(double)>& m,
                                 const SpectralGridPtr& rho = default_spectral_grid(), Diagnostics* diag = nullptr);

// e^{-(r^2+s^2)/(4it)}/(2it) I_nu(rs/(2it)), nu = |k/sigma +- 1/2|.
cplx schrodinger_mode_kernel(int k, const ConeParams& cone, Sign sign, double t, double r, double s);

struct PolarPoint {
  double r, theta;
};

struct HeatSeriesResult {
  cplx value;
  int k_trunc;
  double last_term;  // magnitude of the last pair of terms relative to the sum
};

// k-series of the heat kernel of H^+ (Sign::Plus) or H^- (Sign::Minus). k_trunc = nullopt selects the
// smallest K whose terms drop below 1e-16 of the partial sum (capped at 400).
HeatSeriesResult heat_kernel_series(const ConeParams& cone, Sign sign, double t, PolarPoint x, PolarPoint y,
                                    std::optional<int> k_trunc = std::nullopt, Diagnostics* diag = nullptr);

struct ImageAngle {
  double beta;
  double weight;  // 1, or 1/2 on the boundary |beta| = pi
};

// Angles beta = theta - omega + 2 pi sigma j with |beta| <= pi.
std::vector<ImageAngle> image_angles(const ConeParams& cone, double theta, double omega);

cplx b_pm(double tau, double theta, double omega, const ConeParams& cone, Sign sign, Diagnostics* diag = nullptr);

cplx heat_kernel_closed(const ConeParams& cone, Sign sign, double t, PolarPoint x, PolarPoint y,
                        Diagnostics* diag = nullptr);

// Geodesic distance squared on the cone.
double cone_distance_sq(const ConeParams& cone, PolarPoint x, PolarPoint y);

}  // namespace cone
