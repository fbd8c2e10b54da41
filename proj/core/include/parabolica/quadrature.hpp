#pragma once

#include <functional>

namespace parabolica::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b].
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, unsigned max_depth = 15);

/// Integrand with an inverse-square-root endpoint behaviour at `a`: the
/// substitution u = a + v^2 turns it into a smooth integral over v.
Result integrate_lower_sqrt(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-13);

/// Same, singular at the upper endpoint: u = b - v^2.
Result integrate_upper_sqrt(const std::function<double(double)>& f, double a, double b,
                            double rel_tol = 1e-13);

}  // namespace parabolica::quadrature
