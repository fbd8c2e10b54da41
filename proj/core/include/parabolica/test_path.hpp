#pragma once

// Explicit finite-action path between two configurations of size <= R,
// routed through R x0' with a piecewise 2/3-power homotopy profile that
// slows down at each parameter value where a pair may collide.

#include "parabolica/action.hpp"

namespace parabolica {

struct TestPath {
  DiscretePath path;
  double action = 0.0;
  /// 2 (16 R^2 / 3T)(h+1)^{1/2} + (6 U(x0') T / R)(h+1), h = max(h_x, h_x').
  double bound = 0.0;
  /// Same with h = N(N-1)/2.
  double bound_generic = 0.0;
  int h_start = 0;
  int h_end = 0;
  bool within_bound = false;
};

/// Upper bound on the action of the test path.
double test_path_bound(double R, double T, double u_x0p, int h);

/// `nodes_per_piece` nodes sample each monotone piece of the profile.
TestPath build_test_path(const MassSystem& sys, const Configuration& x,
                         const Configuration& x_prime, double R, double T,
                         const Configuration& x0_prime, int nodes_per_piece = 64);

}  // namespace parabolica
