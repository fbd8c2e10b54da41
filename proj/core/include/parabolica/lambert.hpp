#pragma once

// Fixed-center Kepler comparison problem L0 = |x'|^2/2 + u0/|x| on
// configuration space, the excess functions F, F0 and script-G around the
// homothetic ray, and sampled checks of the localization estimates.
//
// The direct L0 arc joining x1 to x2 in time s has the same action as the
// collinear arc joining d1 = (r1 + r2 - c)/2 to d2 = (r1 + r2 + c)/2, where
// c is the chord |x1 - x2|.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "parabolica/action.hpp"
#include "parabolica/central.hpp"

namespace parabolica {

struct ExcessReport {
  Configuration x;
  double s = 0.0;
  double F_val = 0.0;
  double F0_val = 0.0;
  double scriptG_val = 0.0;
  double slack = 0.0;
  bool chain_ok = false;
  /// The two minimized terms of F and their quadrature-error estimates.
  double action_first = 0.0;
  double action_second = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct ExcessOptions {
  int segments = 1000;
  double tol = 1e-8;
  int max_iterations = 20000;
  /// Added to the quadrature-error slack.
  double slack_floor = 1e-6;
  int jobs = 1;
};

struct LocalizationConstants {
  double G2 = 0.0;        // measured G''(alpha)
  double C1 = 0.0;        // G(r) >= C1 (r - alpha)^2 on |r - alpha| <= delta_bar
  double delta_bar = 0.0;
  double eps_bar = 0.0;
  double C2 = 0.0;
};

struct LocalizationSampleSpec {
  int radial = 400;
  int angular = 400;
  int ball = 200;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct LocalizationViolation {
  std::string check;  // "radial", "angular" or "ball"
  double eps = 0.0;
  double s = 0.0;
  double r = 0.0;
  double angle = 0.0;
  double value = 0.0;
  double limit = 0.0;
};

struct LocalizationCase {
  double eps = 0.0;
  double s = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta = 0.0;
  bool outside_hypotheses = false;
  int samples = 0;
  int violations = 0;
  /// Smallest value of the tested quantity minus its threshold per check.
  double radial_margin = 0.0;
  double angular_margin = 0.0;
  double ball_margin = 0.0;
};

struct LocalizationReport {
  LocalizationConstants constants;
  std::vector<LocalizationCase> cases;
  std::vector<LocalizationViolation> violations;  // only for cases inside the hypotheses
  int samples = 0;
  bool passed = true;
};

namespace lambert {

/// (d1, d2) with 0 <= d1 <= d2.
std::pair<double, double> collinear_reduction(const MassSystem& sys, const Configuration& x1,
                                              const Configuration& x2);

/// Action of the direct L0 arc from x1 to x2 in time s. Either endpoint may be 0.
double kepler_central_action_A0(const MassSystem& sys, const Configuration& x1,
                                const Configuration& x2, double s, double u0);

/// F0(x, s) = A0(0, x; 1) + A0(x, gamma0(s); s - 1) - A0(0, gamma0(s); s).
double excess_F0(const MassSystem& sys, const CentralConfig& cc, const Configuration& x, double s);

/// F(x, s) with both N-body terms from the discrete minimizer; the
/// subtracted term is alpha0 s^{1/3}.
ExcessReport excess_F(const MassSystem& sys, const CentralConfig& cc, const Configuration& x,
                      double s, const ExcessOptions& options = {});

LocalizationConstants localization_constants(const CentralConfig& cc);

/// delta1, delta2, delta for eps.
LocalizationCase localization_radii(const LocalizationConstants& k, const CentralConfig& cc,
                                    double eps);

LocalizationReport verify_localization(const MassSystem& sys, const CentralConfig& cc,
                                       const std::vector<double>& eps_list,
                                       const std::vector<double>& s_list,
                                       const LocalizationSampleSpec& spec = {});

/// Sum of the angles between consecutive nodes.
double polar_angle_variation(const MassSystem& sys, const DiscretePath& path);

/// Unit vector mass-orthogonal to x0 with zero center of mass, from `rng`.
Configuration random_orthogonal_direction(const MassSystem& sys, const Configuration& x0,
                                          std::mt19937_64& rng);

}  // namespace lambert
}  // namespace parabolica
