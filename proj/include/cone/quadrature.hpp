#pragma once

#include <vector>

namespace cone {

struct QuadratureRule {
  std::vector<double> nodes, weights;
};

// Composite 8-point Gauss-Legendre rule on [a, b] with the given number of equal panels.
QuadratureRule gauss_legendre_panels(double a, double b, std::size_t panels);

}  // namespace cone
