#pragma once

// Discretized Lagrangian action A = int (|q'|^2/2 + U(q)) dt over paths in
// configuration space, its exact gradient, and fixed-endpoint minimization.
//
// A path is piecewise linear between nodes. The kinetic part is integrated
// exactly; the potential part by 2-point Gauss on each segment, so nodes
// themselves are never evaluated and an endpoint may sit at total collision.

#include <optional>
#include <string>
#include <vector>

#include "parabolica/central.hpp"
#include "parabolica/configspace.hpp"

namespace parabolica {

struct DiscretePath {
  std::vector<double> times;
  std::vector<Configuration> nodes;
  bool fix_start = true;
  bool fix_end = true;

  std::size_t size() const { return times.size(); }
  std::size_t segments() const { return times.empty() ? 0 : times.size() - 1; }
  double start_time() const { return times.front(); }
  double end_time() const { return times.back(); }
  double duration() const { return times.back() - times.front(); }
};

/// Newtonian U, or the fixed-center comparison potential u0 / ||x||.
struct PotentialModel {
  enum class Kind { Newtonian, CentralKepler };
  Kind kind = Kind::Newtonian;
  double u0 = 0.0;

  static PotentialModel newtonian() { return {}; }
  static PotentialModel central_kepler(double u0) { return {Kind::CentralKepler, u0}; }

  double value(const MassSystem& sys, const double* x) const;
  /// Euclidean partials dU/dx written to `out`; returns U.
  double value_and_partials(const MassSystem& sys, const double* x, double* out) const;
  /// Distance to the singular set: min pairwise distance, or ||x||.
  double separation(const MassSystem& sys, const double* x) const;
};

struct GridSpec {
  enum class Grading { Uniform, Start, End };
  int segments = 1000;
  Grading grading = Grading::Uniform;
  /// Nodes are uniform in u = (t - t0 + offset)^{1/power} on graded grids.
  double power = 3.0;
  double offset = 0.0;
};

struct MinimizeReport {
  DiscretePath path;
  double action = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  double min_separation = 0.0;  // over interior nodes
  bool converged = false;
  std::string init;
  std::string message;
};

struct MinimizeOptions {
  enum class Init { StraightHomotopy, PowerHomotopy, TestPath, Provided };
  GridSpec grid;
  std::vector<Init> inits = {Init::StraightHomotopy, Init::PowerHomotopy};
  std::optional<DiscretePath> warm_start;             // for Init::Provided
  std::optional<Configuration> test_path_direction;   // x0' for Init::TestPath
  double tol = 1e-8;
  int max_iterations = 20000;
  int memory = 12;
  /// Steps bringing interior separations below this times the path scale
  /// are rejected.
  double separation_floor = 1e-7;
  PotentialModel potential;
  int jobs = 1;
};

/// Thrown when every start ends outside the domain.
class MinimizeFailure : public SolverError {
 public:
  using SolverError::SolverError;
};

namespace action {

void validate_path(const MassSystem& sys, const DiscretePath& path);

/// Node times on [t0, t0 + T].
std::vector<double> make_grid(double t0, double T, const GridSpec& spec);

/// +infinity if a quadrature point is at collision.
double discrete_action(const MassSystem& sys, const DiscretePath& path,
                       const PotentialModel& potential = {});

/// Euclidean partials dA/dq for every node; zero on fixed endpoints.
std::vector<Configuration> action_gradient(const MassSystem& sys, const DiscretePath& path,
                                           const PotentialModel& potential = {});

/// |A_gauss2 - A_refined| where the refined rule splits every segment into
/// four 2-point Gauss pieces. The kinetic term is exact, so this bounds the
/// discretization error of the action of the piecewise-linear path.
double quadrature_error_estimate(const MassSystem& sys, const DiscretePath& path,
                                 const PotentialModel& potential = {});

/// E_k = |dq/dt|^2/2 - (U(q_k) + U(q_{k+1}))/2 on each segment.
std::vector<double> segment_energies(const MassSystem& sys, const DiscretePath& path,
                                     const PotentialModel& potential = {});
/// max - min of segment energies, skipping the two end segments.
double energy_drift(const MassSystem& sys, const DiscretePath& path,
                    const PotentialModel& potential = {});

/// Linear interpolation of the path at time t.
Configuration sample_linear(const DiscretePath& path, double t);
DiscretePath resample_linear(const DiscretePath& path, const std::vector<double>& times);

/// varpi^lambda(t) = lambda^{2/3} varpi(t / lambda).
DiscretePath rescale_path(const DiscretePath& path, double lambda);

/// Minimizes over the interior nodes of `initial` with its endpoints fixed.
MinimizeReport minimize_path(const MassSystem& sys, const DiscretePath& initial,
                             const MinimizeOptions& options);

/// Multi-start minimization between x_start at t = 0 and x_end at t = T.
/// Reports the least action found.
MinimizeReport minimize_fixed_endpoints(const MassSystem& sys, const Configuration& x_start,
                                        const Configuration& x_end, double T,
                                        const MinimizeOptions& options = {});

struct SundmanCheck {
  bool holds = false;
  double margin = 0.0;         // action - S(|x|, |x'|; T)
  double slack = 0.0;          // quadrature error estimate
  double kepler_action = 0.0;  // S(|x|, |x'|; T)
};

/// Discrete action >= S(|x_start|, |x_end|; T) - slack.
SundmanCheck sundman_lower_bound_check(const MassSystem& sys, const CentralConfig& cc,
                                       const MinimizeReport& report);

}  // namespace action
}  // namespace parabolica
