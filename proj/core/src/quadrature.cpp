#include "parabolica/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

namespace parabolica::quadrature {

Result integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 unsigned max_depth) {
  if (a == b) return {};
  Result r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth,
                                                                          rel_tol, &r.error);
  return r;
}

Result integrate_lower_sqrt(const std::function<double(double)>& f, double a, double b,
                            double rel_tol) {
  if (a == b) return {};
  const double span = std::sqrt(b - a);
  return integrate([&](double v) { return 2.0 * v * f(a + v * v); }, 0.0, span,
                   rel_tol);
}

Result integrate_upper_sqrt(const std::function<double(double)>& f, double a, double b,
                            double rel_tol) {
  if (a == b) return {};
  const double span = std::sqrt(b - a);
  return integrate([&](double w) { return 2.0 * w * f(b - w * w); }, 0.0, span,
                   rel_tol);
}

}  // namespace parabolica::quadrature
