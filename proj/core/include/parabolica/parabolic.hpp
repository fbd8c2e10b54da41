#pragma once

// Minimizing sequence gamma_n from x_i to gamma0(t_n) in time t_n, extraction
// of the limit motion on compact windows, and parabolicity diagnostics.

#include <string>
#include <vector>

#include "parabolica/action.hpp"
#include "parabolica/central.hpp"

namespace parabolica {

struct ParabolicOptions {
  std::vector<double> t_seq;  // empty: t1 * 2^n, n = 1..K
  double t1 = 1.0;
  int K = 8;
  int segments = 1000;
  /// Start-graded grid uniform in (t + offset)^{1/power}.
  double grid_power = 3.0;
  double grid_offset = 0.05;
  double tol = 1e-8;
  int max_iterations = 20000;
  /// Windows [0, T] are used only while T <= t_n / window_ratio.
  double window_ratio = 4.0;
  /// Warm start from the previous minimizer extended along gamma0.
  bool warm_start = true;
  int jobs = 1;
};

struct SequenceEntry {
  double t = 0.0;
  bool ok = false;
  MinimizeReport report;
  std::string error;
};

struct ConvergenceRow {
  double window = 0.0;
  double t_prev = 0.0;
  double t_next = 0.0;
  double sup_diff = 0.0;  // sup over [0, window] of ||gamma_prev - gamma_next||
};

struct LimitResult {
  DiscretePath limit;
  std::vector<ConvergenceRow> table;
  bool converging = true;
  std::string warning;
};

struct DiagnosticRow {
  double t = 0.0;
  double r_over_t23 = 0.0;
  double angle = 0.0;
  double angle_orbit = 0.0;
  double I_over_t43 = 0.0;
  double speed = 0.0;
  double energy = 0.0;
  double Utilde = 0.0;
  double gradUtilde = 0.0;
};

struct GrowthFit {
  double exponent = 0.0;       // slope of log A(gamma|[0,T]) against log T
  double coefficient = 0.0;    // max over T of A / T^{1/3}
  std::vector<double> windows;
  std::vector<double> actions;
};

namespace parabolic {

std::vector<double> time_sequence(const ParabolicOptions& options);

/// gamma_n for every t_n; failures are recorded and the sequence continues.
std::vector<SequenceEntry> minimizer_sequence(const MassSystem& sys, const CentralConfig& cc,
                                              const Configuration& x_i,
                                              const ParabolicOptions& options = {});

/// Piecewise cubic interpolation in the variable t^{2/3}.
Configuration interpolate(const DiscretePath& path, double t);

/// Restriction of `path` to [start, T] on its own nodes plus T.
DiscretePath restrict_path(const DiscretePath& path, double T);

/// Cauchy table over consecutive successful entries for every window with
/// T <= t_n / window_ratio; the limit is the last path on the largest
/// admissible window.
LimitResult extract_limit_path(const MassSystem& sys, const std::vector<SequenceEntry>& entries,
                               const std::vector<double>& windows, double window_ratio);

/// One row per interior node of `limit` (t > 0).
std::vector<DiagnosticRow> parabolic_diagnostics(const MassSystem& sys, const CentralConfig& cc,
                                                 const DiscretePath& limit);

/// Median of column(row) over rows with t in [lo, hi].
double window_median(const std::vector<DiagnosticRow>& rows, double lo, double hi,
                     double (*column)(const DiagnosticRow&));

/// Log-log fit of the action of path|[0,T] over the given windows.
GrowthFit action_growth(const MassSystem& sys, const DiscretePath& path,
                        const std::vector<double>& windows);

/// sup over T in [T_min, T_max] (nodes of the path) of ||gamma(T)|| / T^{2/3}.
double window_radius_bound(const MassSystem& sys, const DiscretePath& path, double T_min,
                           double T_max);

}  // namespace parabolic
}  // namespace parabolica
