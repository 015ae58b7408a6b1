#include "cone/extension.hpp"

#include <cmath>

#include "cone/specfun.hpp"

namespace cone {

namespace {

double interior_norm(const SpinorProfile& p, std::size_t lo, std::size_t hi) {
  const auto& w = p.grid->weights();
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += w[i] * (std::norm(p.upper[i]) + std::norm(p.lower[i]));
  return std::sqrt(s);
}

// Value at x = 0 of the cubic through (x_i, y_i), i = 0..3 (Neville).
cplx neville_at_zero(const double* x, const cplx* y) {
  cplx p[4] = {y[0], y[1], y[2], y[3]};
  for (int m = 1; m < 4; ++m)
    for (int i = 0; i + m < 4; ++i) p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  return p[0];
}

}  // namespace

DeficiencyIndices deficiency_indices(int k, const ConeParams& cone) {
  const double ks = k / cone.sigma();
  if (std::abs(ks + 0.5) < 1.0 && std::abs(ks - 0.5) < 1.0) return {1, 1};
  return {0, 0};
}

DeficiencyElement DeficiencyElement::make(Sign sign, RadialGridPtr grid) {
  return {sign, deficiency_candidate(0, ConeParams(1.0), sign, std::move(grid))};
}

SpinorProfile deficiency_candidate(int k, const ConeParams& cone, Sign sign, RadialGridPtr grid) {
  const double ks = k / cone.sigma();
  const Order up(std::abs(ks + 0.5)), lo(std::abs(ks - 0.5));
  const cplx unit = sign == Sign::Plus ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
  SpinorProfile p(k, grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = (*grid)[i];
    p.upper[i] = bessel_k(up, r);
    p.lower[i] = unit * bessel_k(lo, r);
  }
  return p;
}

double deficiency_solution_residual(int k, const ConeParams& cone, const SpinorProfile& candidate, Sign sign) {
  const std::size_t n = candidate.size();
  const std::size_t lo = 2, hi = n - 2;
  const double nc = interior_norm(candidate, lo, hi);
  if (!(nc > 0.0)) throw DomainError("deficiency_solution_residual: candidate has zero norm");
  const cplx unit = sign == Sign::Plus ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
  const SpinorProfile res = apply_dk(k, cone, candidate) - unit * candidate;
  return interior_norm(res, lo, hi) / nc;
}

BoundaryForm boundary_form(const SpinorProfile& chi, const SpinorProfile& phi) {
  if (chi.size() != phi.size() || chi.grid->points() != phi.grid->points())
    throw std::invalid_argument("boundary_form: profiles on different grids");
  const RadialGrid& g = *chi.grid;
  const std::size_t n = g.size();
  auto w = [&](std::size_t i) {
    return g[i] * (chi.upper[i] * std::conj(phi.lower[i]) - chi.lower[i] * std::conj(phi.upper[i]));
  };
  BoundaryForm out{};
  double x0[4], x1[4];
  cplx y0[4], y1[4];
  for (int i = 0; i < 4; ++i) {
    x0[i] = g[i];
    y0[i] = w(i);
    x1[i] = 1.0 / g[n - 1 - i];
    y1[i] = w(n - 1 - i);
  }
  out.at_zero = neville_at_zero(x0, y0);
  out.at_infinity = neville_at_zero(x1, y1);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::sqrt(std::norm(chi.upper[i]) + std::norm(chi.lower[i]));
    const double b = std::sqrt(std::norm(phi.upper[i]) + std::norm(phi.lower[i]));
    out.scale = std::max(out.scale, g[i] * a * b);
  }
  return out;
}

SpinorProfile singular_part(const ExtensionParam& gamma, RadialGridPtr grid) {
  SpinorProfile p(0, grid);
  const Order half(0.5);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double kv = bessel_k(half, (*grid)[i]);
    p.upper[i] = gamma.cos_gamma() * kv;
    p.lower[i] = gamma.sin_gamma() * kv;
  }
  return p;
}

SpinorProfile DomainElement::value() const {
  SpinorProfile p = singular_part(gamma, regular.grid);
  p *= c;
  p += regular;
  return p;
}

SpinorProfile apply_d0_gamma(const DomainElement& elem, Diagnostics* diag) {
  SpinorProfile out = apply_dk(0, ConeParams(1.0), elem.regular, diag);
  const Order half(0.5);
  const RadialGrid& g = *elem.regular.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double kv = bessel_k(half, g[i]);
    out.upper[i] += elem.c * elem.gamma.sin_gamma() * kv;
    out.lower[i] -= elem.c * elem.gamma.cos_gamma() * kv;
  }
  return out;
}

}  // namespace cone
