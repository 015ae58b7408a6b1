#pragma once

#include <array>
#include <map>
#include <span>
#include <vector>

#include "cone/errors.hpp"
#include "cone/grid.hpp"
#include "cone/params.hpp"

namespace cone {

using Spinor = std::array<cplx, 2>;

// Two-component radial data of one angular mode.
struct SpinorProfile {
  int k = 0;
  RadialGridPtr grid;
  std::vector<cplx> upper, lower;

  SpinorProfile() = default;
  SpinorProfile(int k, RadialGridPtr grid);  // zero profile
  SpinorProfile(int k, RadialGridPtr grid, std::vector<cplx> upper, std::vector<cplx> lower);

  std::size_t size() const { return upper.size(); }
  double norm() const;  // L^2(r dr)^2 norm
  SpinorProfile& operator+=(const SpinorProfile& o);
  SpinorProfile& operator-=(const SpinorProfile& o);
  SpinorProfile& operator*=(cplx c);
};

SpinorProfile operator+(SpinorProfile a, const SpinorProfile& b);
SpinorProfile operator-(SpinorProfile a, const SpinorProfile& b);
SpinorProfile operator*(cplx c, SpinorProfile a);

// <a, b> = int (a1 conj(b1) + a2 conj(b2)) r dr
cplx inner(const SpinorProfile& a, const SpinorProfile& b);

struct ModeSpectrum {
  ConeParams cone{1.0};
  RadialGridPtr grid;
  int k_max = 0;
  std::map<int, SpinorProfile> modes;

  ModeSpectrum() = default;
  ModeSpectrum(ConeParams cone, RadialGridPtr grid, int k_max);

  // Inserts (or replaces) a profile; rejects |k| > k_max and foreign grids.
  void set(SpinorProfile p);
  const SpinorProfile* find(int k) const;
  double norm() const;
};

// Values on RadialGrid x AngularGrid, index i * M + m.
struct SpinorField {
  ConeParams cone{1.0};
  RadialGridPtr grid;
  std::size_t m = 0;
  std::vector<Spinor> values;

  SpinorField() = default;
  SpinorField(ConeParams cone, RadialGridPtr grid, std::size_t m);

  AngularGrid angles() const { return AngularGrid(cone.sigma(), m); }
  Spinor& at(std::size_t i, std::size_t j) { return values[i * m + j]; }
  const Spinor& at(std::size_t i, std::size_t j) const { return values[i * m + j]; }
  double norm() const;  // L^2(X) norm by direct 2-D quadrature
};

struct AngularEigen {
  double eigenvalue;
  Spinor harmonic;
};

AngularEigen angular_eigen(int k, const ConeParams& cone, double theta);

std::size_t min_angular_nodes(int k_max);

ModeSpectrum decompose(const SpinorField& field, int k_max);
SpinorField synthesize(const ModeSpectrum& spec, std::size_t m);

enum class Projection { P0, Pperp, Pgt, Plt };
ModeSpectrum project(const ModeSpectrum& spec, Projection which);

// d/dr + mu/r by fourth-order differences in ln r.
std::vector<cplx> apply_dmu(double mu, const RadialGrid& grid, std::span<const cplx> f, Diagnostics* diag = nullptr);

// (-(d_r + (1/2 - k/sigma)/r) lower, (d_r + (1/2 + k/sigma)/r) upper)
SpinorProfile apply_dk(int k, const ConeParams& cone, const SpinorProfile& p, Diagnostics* diag = nullptr);

// Bessel orders of the two components of mode k and the sign pattern of the
// transform: plus means Psi = sign (J_upper, J_lower)/sqrt2, minus means
// Psi = sign (J_upper, -J_lower)/sqrt2.
struct ModeOrders {
  double upper;
  double lower;
  bool plus;
  double sign;
};

ModeOrders mode_orders(int k, const ConeParams& cone, const ExtensionParam& gamma);

// Psi_k(|rho| r), lower component negated for rho < 0; includes the 1/sqrt(2).
Spinor generalized_eigenfunction(int k, const ConeParams& cone, const ExtensionParam& gamma, double rho, double r);

SpinorProfile generalized_eigenfunction_profile(int k, const ConeParams& cone, const ExtensionParam& gamma, double rho,
                                                RadialGridPtr grid);

}  // namespace cone
