#include "parabolica/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace parabolica::lbfgs {

namespace {

struct Pair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd apply_h0(const Preconditioner& precondition, const Eigen::VectorXd& v) {
  return precondition ? precondition(v) : v;
}

Eigen::VectorXd two_loop(const std::deque<Pair>& pairs, const Preconditioner& precondition,
                         const Eigen::VectorXd& g) {
  Eigen::VectorXd q = g;
  std::vector<double> alpha(pairs.size());
  for (std::size_t i = pairs.size(); i-- > 0;) {
    alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
    q -= alpha[i] * pairs[i].y;
  }
  Eigen::VectorXd r = apply_h0(precondition, q);
  if (!pairs.empty()) {
    const Pair& last = pairs.back();
    const double yhy = last.y.dot(apply_h0(precondition, last.y));
    if (yhy > 0.0) r *= last.s.dot(last.y) / yhy;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double beta = pairs[i].rho * pairs[i].y.dot(r);
    r += (alpha[i] - beta) * pairs[i].s;
  }
  return r;
}

}  // namespace

Result minimize(const Objective& objective, Eigen::VectorXd x0, const Options& options,
                const Preconditioner& precondition, const Feasible& feasible) {
  Result out;
  out.x = std::move(x0);
  Eigen::VectorXd g(out.x.size());
  out.f = objective(out.x, g);
  if (!std::isfinite(out.f)) {
    out.stop_reason = "initial point outside domain";
    out.grad_norm = std::numeric_limits<double>::infinity();
    return out;
  }
  out.grad_norm = g.norm();

  std::deque<Pair> pairs;
  Eigen::VectorXd g_new(out.x.size());
  const double eps = std::numeric_limits<double>::epsilon();

  for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
    if (out.grad_norm < options.tol) {
      out.converged = true;
      out.stop_reason = "gradient tolerance reached";
      return out;
    }
    Eigen::VectorXd d = -two_loop(pairs, precondition, g);
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      pairs.clear();
      d = -apply_h0(precondition, g);
      slope = g.dot(d);
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int k = 0; k < options.max_backtracks; ++k, step *= 0.5) {
      x_new = out.x + step * d;
      if (feasible && !feasible(x_new)) continue;
      f_new = objective(x_new, g_new);
      if (!std::isfinite(f_new)) continue;
      // The second clause lets the gradient keep shrinking once the decrease
      // in f is below rounding noise.
      const bool armijo = f_new <= out.f + options.armijo * step * slope;
      const bool noise = f_new <= out.f + 16.0 * eps * std::abs(out.f) &&
                         g_new.norm() < out.grad_norm;
      if (armijo || noise) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!pairs.empty()) {
        pairs.clear();
        continue;
      }
      out.stop_reason = "line search failed";
      return out;
    }

    Pair p{x_new - out.x, g_new - g, 0.0};
    const double sy = p.s.dot(p.y);
    if (sy > eps * p.s.norm() * p.y.norm()) {
      p.rho = 1.0 / sy;
      pairs.push_back(std::move(p));
      if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
    }
    out.x = std::move(x_new);
    out.f = f_new;
    g = g_new;
    out.grad_norm = g.norm();
  }
  out.converged = out.grad_norm < options.tol;
  out.stop_reason = out.converged ? "gradient tolerance reached" : "iteration budget exhausted";
  return out;
}

}  // namespace parabolica::lbfgs
