#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cone/eigenbasis.hpp"
#include "cone/kernels.hpp"
#include "cone/quadrature.hpp"

namespace cone {

// Stored J_nu(rho_a r_i) for one order and one pair of grids. Forward and
// inverse transforms are trapezoid rules in ln r / ln rho; the segment below
// the first node is integrated exactly for data behaving like x^nu there.
class HankelPlan {
public:
  HankelPlan(Order nu, RadialGridPtr r, SpectralGridPtr rho, kernels::Exec exec = kernels::Exec::Parallel);

  double order() const { return nu_; }
  const RadialGridPtr& radial() const { return r_; }
  const SpectralGridPtr& spectral() const { return rho_; }

  // H f(rho_a) = int J_nu(r rho_a) f(r) r dr
  std::vector<cplx> forward(std::span<const cplx> f, Diagnostics* diag = nullptr) const;
  // H F(r_i) = int J_nu(r_i rho) F(rho) rho drho
  std::vector<cplx> inverse(std::span<const cplx> F, Diagnostics* diag = nullptr) const;

private:
  double nu_;
  RadialGridPtr r_;
  SpectralGridPtr rho_;
  kernels::Exec exec_;
  std::vector<double> wr_, wrho_, tail_rho_, tail_r_, m_;
};

// Shared plans keyed by (order, grids); a small LRU keeps the most recent ones.
std::shared_ptr<const HankelPlan> hankel_plan(Order nu, const RadialGridPtr& r, const SpectralGridPtr& rho);
void clear_plan_cache();

// True when the largest active frequency times the radial extent exceeds N pi / 8.
bool oscillation_budget_exceeded(double x_active, double y_max, std::size_t n);

std::vector<cplx> hankel_forward(Order nu, const RadialGridPtr& r, std::span<const cplx> f, const SpectralGridPtr& out,
                                 Diagnostics* diag = nullptr);
std::vector<cplx> hankel_inverse(Order nu, const SpectralGridPtr& rho, std::span<const cplx> F, const RadialGridPtr& out,
                                 Diagnostics* diag = nullptr);

// Forward transform at arbitrary frequencies, matrix-free.
std::vector<cplx> hankel_forward_at(Order nu, const RadialGrid& r, std::span<const cplx> f, std::span<const double> rho);

// Signed-energy density: pos[a] = v(+rho_a), neg[a] = v(-rho_a).
struct EnergyDensity {
  SpectralGridPtr grid;
  std::vector<cplx> pos, neg;

  EnergyDensity() = default;
  explicit EnergyDensity(SpectralGridPtr g);
  double norm() const;  // L^2(|rho| drho)
};

SpectralGridPtr default_spectral_grid();

EnergyDensity relativistic_forward(int k, const ConeParams& cone, const ExtensionParam& gamma, const SpinorProfile& p,
                                   const SpectralGridPtr& rho = default_spectral_grid(), Diagnostics* diag = nullptr);
SpinorProfile relativistic_inverse(int k, const ConeParams& cone, const ExtensionParam& gamma, const EnergyDensity& v,
                                   const RadialGridPtr& grid, Diagnostics* diag = nullptr);

// Signed densities at arbitrary frequencies, matrix-free.
struct SignedSamples {
  std::vector<cplx> pos, neg;
};
SignedSamples relativistic_forward_at(int k, const ConeParams& cone, const ExtensionParam& gamma,
                                      const SpinorProfile& p, std::span<const double> rho);

// Inverse transform of densities sampled at rule.nodes (weights of d rho; the factor rho is applied here),
// evaluated at arbitrary radii. Densities are assumed to vanish outside the rule's interval.
struct Spinors {
  std::vector<cplx> upper, lower;
};
Spinors relativistic_inverse_at(int k, const ConeParams& cone, const ExtensionParam& gamma, std::span<const cplx> pos,
                                std::span<const cplx> neg, const QuadratureRule& rule, std::span<const double> r);

double diagonalization_residual(int k, const ConeParams& cone, const ExtensionParam& gamma, const SpinorProfile& p,
                                const SpectralGridPtr& rho = default_spectral_grid(), Diagnostics* diag = nullptr);

}  // namespace cone
