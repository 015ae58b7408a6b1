#pragma once

#include "cone/eigenbasis.hpp"

namespace cone {

struct DeficiencyIndices {
  int n_plus = 0;
  int n_minus = 0;
  bool operator==(const DeficiencyIndices&) const = default;
};

DeficiencyIndices deficiency_indices(int k, const ConeParams& cone);

enum class Sign { Plus, Minus };

// g_+- = (K_{1/2}, +-i K_{1/2}) on a grid.
struct DeficiencyElement {
  Sign sign;
  SpinorProfile profile;

  static DeficiencyElement make(Sign sign, RadialGridPtr grid);
};

// (K_{k/sigma+1/2}, +-i K_{k/sigma-1/2}) for any k; solves d_k g = +-i g formally.
SpinorProfile deficiency_candidate(int k, const ConeParams& cone, Sign sign, RadialGridPtr grid);

// ||d_k g -+ i g|| / ||g|| over the interior nodes.
double deficiency_solution_residual(int k, const ConeParams& cone, const SpinorProfile& candidate, Sign sign);

struct BoundaryForm {
  cplx at_zero;
  cplx at_infinity;
  double scale;  // max over nodes of r |chi| |phi|, for relative judgements
};

// Limits of r (chi_1 conj(phi_2) - chi_2 conj(phi_1)) at both grid ends, by
// cubic extrapolation through the four extreme nodes (in r at 0, in 1/r at infinity).
BoundaryForm boundary_form(const SpinorProfile& chi, const SpinorProfile& phi);

// c (cos g K_{1/2}, sin g K_{1/2}) + regular, regular vanishing at 0.
struct DomainElement {
  cplx c;
  SpinorProfile regular;
  ExtensionParam gamma;

  SpinorProfile value() const;
};

// The singular part of a domain element sampled on the grid of the regular part.
SpinorProfile singular_part(const ExtensionParam& gamma, RadialGridPtr grid);

// c (sin g K_{1/2}, -cos g K_{1/2}) + d_0 regular.
SpinorProfile apply_d0_gamma(const DomainElement& elem, Diagnostics* diag = nullptr);

}  // namespace cone
