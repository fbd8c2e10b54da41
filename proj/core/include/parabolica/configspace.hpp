#pragma once

// Configuration-space geometry of the Newtonian N-body problem.
//
// A configuration is a tuple of N positions in R^d, stored flat and
// body-major. All inner products, norms and angles use the mass scalar
// product x.y = sum_i m_i <r_i, s_i>. The gravitational constant is 1.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace parabolica {

class MassSystem {
 public:
  MassSystem(std::vector<double> masses, int dim);

  int dim() const { return dim_; }
  int n_bodies() const { return static_cast<int>(masses_.size()); }
  std::size_t size() const { return masses_.size() * static_cast<std::size_t>(dim_); }
  double mass(int body) const { return masses_[static_cast<std::size_t>(body)]; }
  std::span<const double> masses() const { return masses_; }
  double total_mass() const { return total_mass_; }

  bool operator==(const MassSystem&) const = default;

 private:
  std::vector<double> masses_;
  int dim_;
  double total_mass_;
};

class Configuration {
 public:
  Configuration() = default;
  Configuration(int n_bodies, int dim);
  Configuration(int n_bodies, int dim, std::vector<double> coords);

  int n_bodies() const { return n_bodies_; }
  int dim() const { return dim_; }
  std::size_t size() const { return coords_.size(); }

  double& operator()(int body, int k) { return coords_[index(body, k)]; }
  double operator()(int body, int k) const { return coords_[index(body, k)]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  double operator[](std::size_t i) const { return coords_[i]; }

  std::span<double> data() { return coords_; }
  std::span<const double> data() const { return coords_; }

  Configuration& operator+=(const Configuration& other);
  Configuration& operator-=(const Configuration& other);
  Configuration& operator*=(double factor);

  friend Configuration operator+(Configuration a, const Configuration& b) { return a += b; }
  friend Configuration operator-(Configuration a, const Configuration& b) { return a -= b; }
  friend Configuration operator*(Configuration a, double f) { return a *= f; }
  friend Configuration operator*(double f, Configuration a) { return a *= f; }
  Configuration operator-() const { return *this * -1.0; }

  bool operator==(const Configuration&) const = default;

  /// Same shape, all coordinates zero.
  Configuration zeros_like() const { return Configuration(n_bodies_, dim_); }

 private:
  std::size_t index(int body, int k) const {
    return static_cast<std::size_t>(body) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(k);
  }

  int n_bodies_ = 0;
  int dim_ = 0;
  std::vector<double> coords_;
};

/// (x, y) in the tangent bundle: a base configuration and a velocity.
struct TangentPair {
  Configuration base;
  Configuration velocity;
};

namespace configspace {

/// Relative tolerance on |sum m_i r_i| for the center-of-mass gauge.
inline constexpr double kComTolerance = 1e-10;
/// Min pairwise distance below this times the RMS radius flags a collision.
inline constexpr double kCollisionThreshold = 1e-9;

void check_shape(const MassSystem& sys, const Configuration& x);

double dot(const MassSystem& sys, const Configuration& x, const Configuration& y);
double norm(const MassSystem& sys, const Configuration& x);

/// Mass-weighted center of mass of the configuration.
std::vector<double> center_of_mass(const MassSystem& sys, const Configuration& x);
/// Subtracts the center of mass from every body.
Configuration project_com(const MassSystem& sys, Configuration x);
bool satisfies_com_gauge(const MassSystem& sys, const Configuration& x);

/// Moment of inertia I(x) = sum m_i |r_i|^2 = ||x||^2.
double inertia(const MassSystem& sys, const Configuration& x);

double min_pairwise_distance(const MassSystem& sys, const Configuration& x);
/// RMS body radius sqrt(I / M); the length scale for collision detection.
double configuration_scale(const MassSystem& sys, const Configuration& x);
bool is_collision(const MassSystem& sys, const Configuration& x);

/// U(x) = sum_{i<j} m_i m_j / |r_i - r_j|; +infinity at collision.
double potential(const MassSystem& sys, const Configuration& x);

/// Normalized potential I^{1/2} U, invariant under dilation.
double normalized_potential(const MassSystem& sys, const Configuration& x);
/// x / ||x||.
Configuration normalize(const MassSystem& sys, const Configuration& x);

/// Gradient of U with respect to the mass scalar product. x'' = grad_U(x)
/// is Newton's equation.
Configuration grad_potential(const MassSystem& sys, const Configuration& x);
/// Euclidean partial derivatives dU/dr_i (= m_i times the mass gradient).
void potential_partials(const MassSystem& sys, const Configuration& x, std::span<double> out);

/// Mass-metric gradient of the normalized potential. It is orthogonal to x
/// (Euler's relation x.grad U = -U), so on the unit sphere it is the
/// tangential gradient.
Configuration grad_normalized_potential(const MassSystem& sys, const Configuration& x);

/// Angle in [0, pi] between two configurations.
double angle_between(const MassSystem& sys, const Configuration& x1, const Configuration& x2);

/// Mass-weighted kinetic quantities for a tangent pair.
double twice_kinetic(const MassSystem& sys, const Configuration& velocity);
double lagrangian(const MassSystem& sys, const TangentPair& state);
double energy(const MassSystem& sys, const TangentPair& state);

/// Gaussian random configuration with center of mass at the origin.
Configuration random_configuration(const MassSystem& sys, std::mt19937_64& rng);

}  // namespace configspace
}  // namespace parabolica
