#pragma once

// Limited-memory BFGS with a user-supplied initial inverse Hessian and a
// feasibility hook for rejecting trial points.

#include <Eigen/Core>
#include <functional>
#include <string>

namespace parabolica::lbfgs {

struct Options {
  int memory = 12;
  int max_iterations = 20000;
  double tol = 1e-8;  // on the Euclidean gradient norm
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct Result {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Returns f(x) and writes the gradient. May return +inf for points outside
/// the domain; the gradient is then ignored.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;
/// Applies the initial inverse Hessian approximation to a vector.
using Preconditioner = std::function<Eigen::VectorXd(const Eigen::VectorXd& v)>;
/// Rejects trial points (e.g. too close to a singularity).
using Feasible = std::function<bool(const Eigen::VectorXd& x)>;

Result minimize(const Objective& objective, Eigen::VectorXd x0, const Options& options,
                const Preconditioner& precondition = {}, const Feasible& feasible = {});

}  // namespace parabolica::lbfgs
