#include "parabolica/central.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parabolica/parallel.hpp"

namespace parabolica::central {

namespace cs = configspace;

ParabolicConstants parabolic_constants(double u0) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw DomainError("parabolic_constants: u0 must be positive");
  ParabolicConstants c;
  c.alpha = std::cbrt(4.5 * u0);
  c.alpha0 = std::sqrt(8.0 * u0 * c.alpha);
  c.beta0 = std::sqrt(8.0 * u0);
  c.beta = 2.0 * std::cbrt(u0 / (std::numbers::pi * std::numbers::pi));
  return c;
}

CentralConfig make_central_config(const MassSystem& sys, const Configuration& x0) {
  CentralConfig cc;
  cc.x0 = cs::project_com(sys, x0);
  cc.x0 = cs::normalize(sys, cc.x0);
  if (cs::is_collision(sys, cc.x0)) throw DomainError("central configuration is a collision");
  cc.u0 = cs::potential(sys, cc.x0);
  cc.residual = cs::norm(sys, cs::grad_normalized_potential(sys, cc.x0));
  cc.constants = parabolic_constants(cc.u0);
  return cc;
}

namespace {

struct DescentResult {
  Configuration x;
  double u = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

DescentResult sphere_descent(const MassSystem& sys, Configuration x, const CentralSearchOptions& opt) {
  x = cs::normalize(sys, cs::project_com(sys, std::move(x)));
  DescentResult out;
  double u = cs::potential(sys, x);
  Configuration g = cs::grad_normalized_potential(sys, x);
  double gn = cs::norm(sys, g);
  double step = 0.1 / std::max(gn, 1e-12);
  Configuration x_prev = x;
  Configuration g_prev = g;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (gn < opt.tol) {
      out.converged = true;
      break;
    }
    if (it > 0) {
      // Barzilai-Borwein trial step, safeguarded by Armijo backtracking.
      const Configuration s = x - x_prev;
      const Configuration y = g - g_prev;
      const double sy = cs::dot(sys, s, y);
      if (sy > 0.0) step = cs::dot(sys, s, s) / sy;
      step = std::clamp(step, 1e-8, 1e3);
    }
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      Configuration trial = x - g * step;
      trial = cs::normalize(sys, cs::project_com(sys, std::move(trial)));
      const double ut = cs::potential(sys, trial);
      if (std::isfinite(ut) && ut <= u - 1e-4 * step * gn * gn) {
        x_prev = std::move(x);
        g_prev = std::move(g);
        x = std::move(trial);
        u = ut;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    g = cs::grad_normalized_potential(sys, x);
    gn = cs::norm(sys, g);
  }
  out.x = std::move(x);
  out.u = u;
  out.residual = gn;
  out.converged = out.converged || gn < opt.tol;
  return out;
}

bool lexicographically_less(const Configuration& a, const Configuration& b) {
  return std::lexicographical_compare(a.data().begin(), a.data().end(), b.data().begin(),
                                      b.data().end());
}

}  // namespace

Configuration canonical_orientation(const MassSystem& sys, const Configuration& x) {
  cs::check_shape(sys, x);
  const int d = sys.dim();
  const int n = sys.n_bodies();
  Eigen::MatrixXd body(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) body(i, k) = x(i, k);

  Eigen::MatrixXd tensor = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) tensor += sys.mass(i) * body.row(i).transpose() * body.row(i);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tensor);
  Eigen::VectorXd values = eig.eigenvalues().reverse();
  Eigen::MatrixXd axes = eig.eigenvectors().rowwise().reverse();

  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  const double length_tol = 1e-12 * std::max(cs::configuration_scale(sys, x), 1e-300);
  int start = 0;
  while (start < d) {
    int end = start + 1;
    while (end < d && std::abs(values(end) - values(start)) <= 1e-8 * scale) ++end;
    const int k = end - start;
    if (k > 1) {
      Eigen::MatrixXd block = axes.middleCols(start, k);
      Eigen::MatrixXd basis(k, 0);
      for (int i = 0; i < n && basis.cols() < k; ++i) {
        Eigen::VectorXd p = block.transpose() * body.row(i).transpose();
        for (int c = 0; c < basis.cols(); ++c) p -= basis.col(c).dot(p) * basis.col(c);
        if (p.norm() > length_tol) {
          basis.conservativeResize(k, basis.cols() + 1);
          basis.col(basis.cols() - 1) = p.normalized();
        }
      }
      for (int e = 0; e < k && basis.cols() < k; ++e) {
        Eigen::VectorXd p = Eigen::VectorXd::Unit(k, e);
        for (int c = 0; c < basis.cols(); ++c) p -= basis.col(c).dot(p) * basis.col(c);
        if (p.norm() > 1e-6) {
          basis.conservativeResize(k, basis.cols() + 1);
          basis.col(basis.cols() - 1) = p.normalized();
        }
      }
      axes.middleCols(start, k) = block * basis;
    }
    start = end;
  }

  Eigen::MatrixXd rotated = body * axes;
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(rotated(i, k)) > length_tol) {
        if (rotated(i, k) < 0.0) rotated.col(k) *= -1.0;
        break;
      }
    }
  }
  Configuration out(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) out(i, k) = rotated(i, k);
  return out;
}

double orbit_angle(const MassSystem& sys, const Configuration& x, const Configuration& x0) {
  cs::check_shape(sys, x);
  cs::check_shape(sys, x0);
  const double n1 = cs::norm(sys, x);
  const double n2 = cs::norm(sys, x0);
  if (n1 == 0.0 || n2 == 0.0) throw DomainError("orbit_angle: zero configuration");
  const int d = sys.dim();
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < sys.n_bodies(); ++i) {
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) cross(a, b) += sys.mass(i) * x(i, a) * x0(i, b);
  }
  // max over O(d) of tr(R^T cross) is the nuclear norm of cross.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross);
  const double best = svd.singularValues().sum();
  return std::acos(std::clamp(best / (n1 * n2), -1.0, 1.0));
}

CentralConfig find_minimizing_central_configuration(const MassSystem& sys,
                                                    const CentralSearchOptions& options) {
  if (options.restarts < 1) throw InputError("restarts must be >= 1");
  if (!(options.tol > 0.0)) throw InputError("tol must be positive");

  std::vector<DescentResult> results(static_cast<std::size_t>(options.restarts));
  parallel_for(results.size(), options.jobs, [&](std::size_t r) {
    std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ULL + r);
    results[r] = sphere_descent(sys, cs::random_configuration(sys, rng), options);
  });

  const DescentResult* best = nullptr;
  Configuration best_canonical;
  bool any_converged = false;
  for (const auto& r : results) any_converged = any_converged || r.converged;
  for (const auto& r : results) {
    if (any_converged && !r.converged) continue;
    Configuration canon = canonical_orientation(sys, r.x);
    const bool better =
        best == nullptr || r.u < best->u - 1e-12 * std::abs(best->u) ||
        (std::abs(r.u - best->u) <= 1e-12 * std::abs(best->u) &&
         lexicographically_less(canon, best_canonical));
    if (better) {
      best = &r;
      best_canonical = std::move(canon);
    }
  }

  CentralConfig cc;
  cc.x0 = cs::normalize(sys, best_canonical);
  cc.u0 = cs::potential(sys, cc.x0);
  cc.residual = cs::norm(sys, cs::grad_normalized_potential(sys, cc.x0));
  cc.constants = parabolic_constants(cc.u0);
  if (!any_converged) {
    throw CentralConvergenceError("central configuration search did not reach tol", cc);
  }
  return cc;
}

Configuration homothetic_parabolic_gamma0(const CentralConfig& cc, double t) {
  if (!(t >= 0.0)) throw DomainError("gamma0: negative time");
  return cc.x0 * (cc.constants.alpha * std::pow(t, 2.0 / 3.0));
}

Configuration gamma0_velocity(const CentralConfig& cc, double t) {
  if (!(t > 0.0)) throw DomainError("gamma0 velocity: t must be positive");
  return cc.x0 * (cc.constants.alpha * (2.0 / 3.0) * std::pow(t, -1.0 / 3.0));
}

Configuration gamma0_acceleration(const CentralConfig& cc, double t) {
  if (!(t > 0.0)) throw DomainError("gamma0 acceleration: t must be positive");
  return cc.x0 * (-cc.constants.alpha * (2.0 / 9.0) * std::pow(t, -4.0 / 3.0));
}

}  // namespace parabolica::central
