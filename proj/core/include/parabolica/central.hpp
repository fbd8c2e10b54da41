#pragma once

// Minimizing normalized central configurations and the homothetic-parabolic
// solution built on them.

#include <cstdint>
#include <vector>

#include "parabolica/configspace.hpp"
#include "parabolica/errors.hpp"

namespace parabolica {

/// Constants derived from the minimal value u0 of the normalized potential:
///   alpha  = (9 u0 / 2)^{1/3}    radius coefficient of the parabolic motion
///   alpha0 = (8 u0 alpha)^{1/2}  action coefficient, S(0, alpha s^{2/3}; s) = alpha0 s^{1/3}
///   beta0  = (8 u0)^{1/2}
///   beta   = 2 (u0 / pi^2)^{1/3} monotonicity threshold for arcs from 0 in unit time
struct ParabolicConstants {
  double alpha = 0.0;
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double beta = 0.0;
};

struct CentralConfig {
  Configuration x0;  // I(x0) = 1
  double u0 = 0.0;
  double residual = 0.0;  // tangential gradient norm of the normalized potential
  ParabolicConstants constants;
};

struct CentralSearchOptions {
  int restarts = 64;
  double tol = 1e-10;
  int max_iterations = 20000;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Thrown when no restart reaches the gradient tolerance. Carries the best
/// iterate found.
class CentralConvergenceError : public SolverError {
 public:
  CentralConvergenceError(const std::string& what, CentralConfig best)
      : SolverError(what), best_(std::move(best)) {}
  const CentralConfig& best() const { return best_; }

 private:
  CentralConfig best_;
};

namespace central {

ParabolicConstants parabolic_constants(double u0);

/// Projected steepest descent of U on the unit sphere {I = 1}, repeated
/// from `restarts` random starts. Reports the least value found.
CentralConfig find_minimizing_central_configuration(const MassSystem& sys,
                                                    const CentralSearchOptions& options = {});

/// Wraps an already known normalized configuration (e.g. read from a file).
CentralConfig make_central_config(const MassSystem& sys, const Configuration& x0);

/// Deterministic representative of the O(d) orbit of x: principal axes of
/// the inertia tensor aligned with the coordinate axes, degenerate
/// eigenspaces resolved by Gram-Schmidt over bodies in index order, signs
/// fixed so the first body with a nonzero coordinate on each axis is positive.
Configuration canonical_orientation(const MassSystem& sys, const Configuration& x);

/// Infimum over the orthogonal group O(d) of the angle between x and R x0.
double orbit_angle(const MassSystem& sys, const Configuration& x, const Configuration& x0);

/// gamma0(t) = alpha x0 t^{2/3}.
Configuration homothetic_parabolic_gamma0(const CentralConfig& cc, double t);
/// Analytic velocity and acceleration of gamma0 (t > 0).
Configuration gamma0_velocity(const CentralConfig& cc, double t);
Configuration gamma0_acceleration(const CentralConfig& cc, double t);

}  // namespace central
}  // namespace parabolica
