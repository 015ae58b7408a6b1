#include "cone/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <stdexcept>

namespace cone {

QuadratureRule gauss_legendre_panels(double a, double b, std::size_t panels) {
  if (!(b > a) || panels == 0) throw std::invalid_argument("gauss_legendre_panels: empty interval");
  using GL = boost::math::quadrature::gauss<double, 8>;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  QuadratureRule q;
  q.nodes.reserve(8 * panels);
  q.weights.reserve(8 * panels);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width, half = 0.5 * width;
    for (std::size_t i = x.size(); i-- > 0;) {
      q.nodes.push_back(mid - half * x[i]);
      q.weights.push_back(half * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      q.nodes.push_back(mid + half * x[i]);
      q.weights.push_back(half * w[i]);
    }
  }
  return q;
}

}  // namespace cone
