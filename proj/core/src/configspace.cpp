#include "parabolica/configspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "parabolica/errors.hpp"

namespace parabolica {

MassSystem::MassSystem(std::vector<double> masses, int dim)
    : masses_(std::move(masses)), dim_(dim), total_mass_(0.0) {
  if (masses_.size() < 2) throw InputError("masses: need at least two bodies");
  if (dim_ < 1) throw InputError("dim: spatial dimension must be >= 1");
  for (double m : masses_) {
    if (!(m > 0.0) || !std::isfinite(m)) throw InputError("masses: every mass must be positive");
    total_mass_ += m;
  }
}

Configuration::Configuration(int n_bodies, int dim)
    : n_bodies_(n_bodies), dim_(dim),
      coords_(static_cast<std::size_t>(n_bodies) * static_cast<std::size_t>(dim), 0.0) {}

Configuration::Configuration(int n_bodies, int dim, std::vector<double> coords)
    : n_bodies_(n_bodies), dim_(dim), coords_(std::move(coords)) {
  if (coords_.size() != static_cast<std::size_t>(n_bodies) * static_cast<std::size_t>(dim)) {
    throw InputError("configuration: coordinate count does not match n_bodies * dim");
  }
}

Configuration& Configuration::operator+=(const Configuration& other) {
  if (other.size() != size()) throw InputError("configuration: shape mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Configuration& Configuration::operator-=(const Configuration& other) {
  if (other.size() != size()) throw InputError("configuration: shape mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Configuration& Configuration::operator*=(double factor) {
  for (double& c : coords_) c *= factor;
  return *this;
}

namespace configspace {

void check_shape(const MassSystem& sys, const Configuration& x) {
  if (x.n_bodies() != sys.n_bodies() || x.dim() != sys.dim()) {
    throw InputError("configuration shape (" + std::to_string(x.n_bodies()) + "x" +
                     std::to_string(x.dim()) + ") does not match mass system (" +
                     std::to_string(sys.n_bodies()) + "x" + std::to_string(sys.dim()) + ")");
  }
}

double dot(const MassSystem& sys, const Configuration& x, const Configuration& y) {
  check_shape(sys, x);
  check_shape(sys, y);
  const int d = sys.dim();
  double sum = 0.0;
  for (int i = 0; i < sys.n_bodies(); ++i) {
    double s = 0.0;
    for (int k = 0; k < d; ++k) s += x(i, k) * y(i, k);
    sum += sys.mass(i) * s;
  }
  return sum;
}

double norm(const MassSystem& sys, const Configuration& x) { return std::sqrt(dot(sys, x, x)); }

std::vector<double> center_of_mass(const MassSystem& sys, const Configuration& x) {
  check_shape(sys, x);
  std::vector<double> com(static_cast<std::size_t>(sys.dim()), 0.0);
  for (int i = 0; i < sys.n_bodies(); ++i) {
    for (int k = 0; k < sys.dim(); ++k) com[static_cast<std::size_t>(k)] += sys.mass(i) * x(i, k);
  }
  for (double& c : com) c /= sys.total_mass();
  return com;
}

Configuration project_com(const MassSystem& sys, Configuration x) {
  const auto com = center_of_mass(sys, x);
  for (int i = 0; i < sys.n_bodies(); ++i) {
    for (int k = 0; k < sys.dim(); ++k) x(i, k) -= com[static_cast<std::size_t>(k)];
  }
  return x;
}

bool satisfies_com_gauge(const MassSystem& sys, const Configuration& x) {
  const auto com = center_of_mass(sys, x);
  double moment = 0.0;
  for (double c : com) moment += c * c;
  moment = std::sqrt(moment) * sys.total_mass();
  return moment <= kComTolerance * std::max(norm(sys, x), 1e-300) * std::sqrt(sys.total_mass());
}

double inertia(const MassSystem& sys, const Configuration& x) { return dot(sys, x, x); }

double min_pairwise_distance(const MassSystem& sys, const Configuration& x) {
  check_shape(sys, x);
  double best = std::numeric_limits<double>::infinity();
  const int d = sys.dim();
  for (int i = 0; i < sys.n_bodies(); ++i) {
    for (int j = i + 1; j < sys.n_bodies(); ++j) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = x(i, k) - x(j, k);
        r2 += diff * diff;
      }
      best = std::min(best, r2);
    }
  }
  return std::sqrt(best);
}

double configuration_scale(const MassSystem& sys, const Configuration& x) {
  return std::sqrt(inertia(sys, x) / sys.total_mass());
}

bool is_collision(const MassSystem& sys, const Configuration& x) {
  const double scale = configuration_scale(sys, x);
  if (scale == 0.0) return true;
  return min_pairwise_distance(sys, x) < kCollisionThreshold * scale;
}

double potential(const MassSystem& sys, const Configuration& x) {
  check_shape(sys, x);
  if (is_collision(sys, x)) return std::numeric_limits<double>::infinity();
  const int d = sys.dim();
  double u = 0.0;
  for (int i = 0; i < sys.n_bodies(); ++i) {
    for (int j = i + 1; j < sys.n_bodies(); ++j) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = x(i, k) - x(j, k);
        r2 += diff * diff;
      }
      u += sys.mass(i) * sys.mass(j) / std::sqrt(r2);
    }
  }
  return u;
}

double normalized_potential(const MassSystem& sys, const Configuration& x) {
  if (is_collision(sys, x)) throw DomainError("normalized_potential: collision configuration");
  return std::sqrt(inertia(sys, x)) * potential(sys, x);
}

Configuration normalize(const MassSystem& sys, const Configuration& x) {
  const double n = norm(sys, x);
  if (n == 0.0) throw DomainError("normalize: zero configuration");
  return x * (1.0 / n);
}

void potential_partials(const MassSystem& sys, const Configuration& x, std::span<double> out) {
  check_shape(sys, x);
  if (out.size() != x.size()) throw InputError("potential_partials: output size mismatch");
  if (is_collision(sys, x)) throw DomainError("potential gradient: collision configuration");
  std::fill(out.begin(), out.end(), 0.0);
  const int d = sys.dim();
  for (int i = 0; i < sys.n_bodies(); ++i) {
    for (int j = i + 1; j < sys.n_bodies(); ++j) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = x(i, k) - x(j, k);
        r2 += diff * diff;
      }
      const double r = std::sqrt(r2);
      const double c = sys.mass(i) * sys.mass(j) / (r2 * r);
      for (int k = 0; k < d; ++k) {
        const double f = c * (x(i, k) - x(j, k));
        out[static_cast<std::size_t>(i * d + k)] -= f;
        out[static_cast<std::size_t>(j * d + k)] += f;
      }
    }
  }
}

Configuration grad_potential(const MassSystem& sys, const Configuration& x) {
  Configuration g = x.zeros_like();
  potential_partials(sys, x, g.data());
  for (int i = 0; i < sys.n_bodies(); ++i) {
    for (int k = 0; k < sys.dim(); ++k) g(i, k) /= sys.mass(i);
  }
  return g;
}

Configuration grad_normalized_potential(const MassSystem& sys, const Configuration& x) {
  const double n = norm(sys, x);
  if (n == 0.0) throw DomainError("grad_normalized_potential: zero configuration");
  const double u = potential(sys, x);
  return grad_potential(sys, x) * n + x * (u / n);
}

double angle_between(const MassSystem& sys, const Configuration& x1, const Configuration& x2) {
  const double n1 = norm(sys, x1);
  const double n2 = norm(sys, x2);
  if (n1 == 0.0 || n2 == 0.0) throw DomainError("angle_between: zero configuration");
  const double c = std::clamp(dot(sys, x1, x2) / (n1 * n2), -1.0, 1.0);
  return std::acos(c);
}

double twice_kinetic(const MassSystem& sys, const Configuration& velocity) {
  return dot(sys, velocity, velocity);
}

double lagrangian(const MassSystem& sys, const TangentPair& state) {
  return 0.5 * twice_kinetic(sys, state.velocity) + potential(sys, state.base);
}

double energy(const MassSystem& sys, const TangentPair& state) {
  return 0.5 * twice_kinetic(sys, state.velocity) - potential(sys, state.base);
}

Configuration random_configuration(const MassSystem& sys, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Configuration x(sys.n_bodies(), sys.dim());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = normal(rng);
  return project_com(sys, std::move(x));
}

}  // namespace configspace
}  // namespace parabolica
