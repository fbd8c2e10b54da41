#include "parabolica/action.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parabolica/errors.hpp"
#include "parabolica/kepler1d.hpp"
#include "parabolica/lbfgs.hpp"
#include "parabolica/parallel.hpp"
#include "parabolica/test_path.hpp"

namespace parabolica {

namespace cs = configspace;

double PotentialModel::value(const MassSystem& sys, const double* x) const {
  const int d = sys.dim();
  const int n = sys.n_bodies();
  if (kind == Kind::CentralKepler) {
    double i2 = 0.0;
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < d; ++k) i2 += sys.mass(b) * x[b * d + k] * x[b * d + k];
    return i2 > 0.0 ? u0 / std::sqrt(i2) : std::numeric_limits<double>::infinity();
  }
  double u = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = x[j * d + k] - x[i * d + k];
        r2 += diff * diff;
      }
      if (r2 == 0.0) return std::numeric_limits<double>::infinity();
      u += sys.mass(i) * sys.mass(j) / std::sqrt(r2);
    }
  }
  return u;
}

double PotentialModel::value_and_partials(const MassSystem& sys, const double* x,
                                          double* out) const {
  const int d = sys.dim();
  const int n = sys.n_bodies();
  std::fill(out, out + n * d, 0.0);
  if (kind == Kind::CentralKepler) {
    double i2 = 0.0;
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < d; ++k) i2 += sys.mass(b) * x[b * d + k] * x[b * d + k];
    if (i2 == 0.0) return std::numeric_limits<double>::infinity();
    const double r = std::sqrt(i2);
    const double c = u0 / (i2 * r);
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < d; ++k) out[b * d + k] = -c * sys.mass(b) * x[b * d + k];
    return u0 / r;
  }
  double u = 0.0;
  double diff[8];
  std::vector<double> big;
  double* dv = diff;
  if (d > 8) {
    big.resize(static_cast<std::size_t>(d));
    dv = big.data();
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        dv[k] = x[j * d + k] - x[i * d + k];
        r2 += dv[k] * dv[k];
      }
      if (r2 == 0.0) return std::numeric_limits<double>::infinity();
      const double r = std::sqrt(r2);
      const double mm = sys.mass(i) * sys.mass(j);
      u += mm / r;
      const double c = mm / (r2 * r);
      for (int k = 0; k < d; ++k) {
        out[i * d + k] += c * dv[k];
        out[j * d + k] -= c * dv[k];
      }
    }
  }
  return u;
}

double PotentialModel::separation(const MassSystem& sys, const double* x) const {
  const int d = sys.dim();
  const int n = sys.n_bodies();
  if (kind == Kind::CentralKepler) {
    double i2 = 0.0;
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < d; ++k) i2 += sys.mass(b) * x[b * d + k] * x[b * d + k];
    return std::sqrt(i2);
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = x[j * d + k] - x[i * d + k];
        r2 += diff * diff;
      }
      best = std::min(best, r2);
    }
  }
  return std::sqrt(best);
}

namespace action {

namespace {

const double kXi1 = 0.5 - 0.5 / std::sqrt(3.0);
const double kXi2 = 0.5 + 0.5 / std::sqrt(3.0);

// Flat evaluation kernel: nodes stored contiguously, node-major.
class Evaluator {
 public:
  Evaluator(const MassSystem& sys, const PotentialModel& pot, const std::vector<double>& times)
      : sys_(sys), pot_(pot), times_(times), dim_(sys.size()), p_(dim_), part_(dim_) {}

  // Returns the action; adds dA/dq into `grad` (size nodes * dim) if given.
  double operator()(const double* q, double* grad) {
    long double total = 0.0L;
    const std::size_t D = dim_;
    const int d = sys_.dim();
    for (std::size_t s = 0; s + 1 < times_.size(); ++s) {
      const double dt = times_[s + 1] - times_[s];
      const double* a = q + s * D;
      const double* b = q + (s + 1) * D;
      double kin = 0.0;
      for (std::size_t c = 0; c < D; ++c) {
        const double m = sys_.mass(static_cast<int>(c) / d);
        const double dq = b[c] - a[c];
        kin += m * dq * dq;
        if (grad) {
          const double v = m * dq / dt;
          grad[s * D + c] -= v;
          grad[(s + 1) * D + c] += v;
        }
      }
      total += kin / (2.0 * dt);
      for (double xi : {kXi1, kXi2}) {
        for (std::size_t c = 0; c < D; ++c) p_[c] = (1.0 - xi) * a[c] + xi * b[c];
        double u;
        if (grad) {
          u = pot_.value_and_partials(sys_, p_.data(), part_.data());
          if (!std::isfinite(u)) return std::numeric_limits<double>::infinity();
          const double wa = 0.5 * dt * (1.0 - xi);
          const double wb = 0.5 * dt * xi;
          for (std::size_t c = 0; c < D; ++c) {
            grad[s * D + c] += wa * part_[c];
            grad[(s + 1) * D + c] += wb * part_[c];
          }
        } else {
          u = pot_.value(sys_, p_.data());
          if (!std::isfinite(u)) return std::numeric_limits<double>::infinity();
        }
        total += 0.5 * dt * u;
      }
    }
    return static_cast<double>(total);
  }

 private:
  const MassSystem& sys_;
  const PotentialModel& pot_;
  const std::vector<double>& times_;
  std::size_t dim_;
  std::vector<double> p_;
  std::vector<double> part_;
};

std::vector<double> flatten(const DiscretePath& path) {
  std::vector<double> q;
  q.reserve(path.size() * (path.nodes.empty() ? 0 : path.nodes[0].size()));
  for (const auto& node : path.nodes) q.insert(q.end(), node.data().begin(), node.data().end());
  return q;
}

double path_scale(const MassSystem& sys, const DiscretePath& path) {
  double scale = 0.0;
  for (const auto& node : path.nodes) scale = std::max(scale, cs::configuration_scale(sys, node));
  return scale;
}

double interior_separation(const MassSystem& sys, const PotentialModel& pot,
                           const std::vector<double>& q, std::size_t nodes) {
  const std::size_t D = sys.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < nodes; ++k) best = std::min(best, pot.separation(sys, &q[k * D]));
  return best;
}

const char* init_name(MinimizeOptions::Init init) {
  switch (init) {
    case MinimizeOptions::Init::StraightHomotopy: return "straight";
    case MinimizeOptions::Init::PowerHomotopy: return "power";
    case MinimizeOptions::Init::TestPath: return "testpath";
    case MinimizeOptions::Init::Provided: return "provided";
  }
  return "unknown";
}

}  // namespace

void validate_path(const MassSystem& sys, const DiscretePath& path) {
  if (path.times.size() < 2) throw InputError("path: need at least two nodes");
  if (path.times.size() != path.nodes.size()) throw InputError("path: times and nodes differ in length");
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    if (!(path.times[k + 1] > path.times[k])) throw InputError("path: times must be strictly increasing");
  }
  for (const auto& node : path.nodes) cs::check_shape(sys, node);
}

std::vector<double> make_grid(double t0, double T, const GridSpec& spec) {
  if (!(T > 0.0)) throw DomainError("grid: duration must be positive");
  if (spec.segments < 1) throw InputError("grid: need at least one segment");
  if (!(spec.power >= 1.0)) throw InputError("grid: grading power must be >= 1");
  if (!(spec.offset >= 0.0)) throw InputError("grid: offset must be >= 0");
  const int M = spec.segments;
  std::vector<double> t(static_cast<std::size_t>(M) + 1);
  if (spec.grading == GridSpec::Grading::Uniform) {
    for (int k = 0; k <= M; ++k) t[k] = t0 + T * k / M;
  } else {
    const double ua = std::pow(spec.offset, 1.0 / spec.power);
    const double ub = std::pow(T + spec.offset, 1.0 / spec.power);
    for (int k = 0; k <= M; ++k) {
      const double u = ua + (ub - ua) * k / M;
      const double local = std::pow(u, spec.power) - spec.offset;
      if (spec.grading == GridSpec::Grading::Start) {
        t[k] = t0 + local;
      } else {
        t[M - k] = t0 + T - local;
      }
    }
  }
  t.front() = t0;
  t.back() = t0 + T;
  return t;
}

double discrete_action(const MassSystem& sys, const DiscretePath& path,
                       const PotentialModel& potential) {
  validate_path(sys, path);
  const std::vector<double> q = flatten(path);
  Evaluator eval(sys, potential, path.times);
  return eval(q.data(), nullptr);
}

std::vector<Configuration> action_gradient(const MassSystem& sys, const DiscretePath& path,
                                           const PotentialModel& potential) {
  validate_path(sys, path);
  const std::vector<double> q = flatten(path);
  std::vector<double> g(q.size(), 0.0);
  Evaluator eval(sys, potential, path.times);
  if (!std::isfinite(eval(q.data(), g.data()))) {
    throw DomainError("action gradient: path passes through a collision");
  }
  const std::size_t D = sys.size();
  std::vector<Configuration> out;
  out.reserve(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) {
    out.emplace_back(sys.n_bodies(), sys.dim(),
                     std::vector<double>(g.begin() + k * D, g.begin() + (k + 1) * D));
  }
  if (path.fix_start) out.front() = out.front().zeros_like();
  if (path.fix_end) out.back() = out.back().zeros_like();
  return out;
}

double quadrature_error_estimate(const MassSystem& sys, const DiscretePath& path,
                                 const PotentialModel& potential) {
  validate_path(sys, path);
  const std::size_t D = sys.size();
  std::vector<double> p(D);
  auto at = [&](const Configuration& a, const Configuration& b, double xi) {
    for (std::size_t c = 0; c < D; ++c) p[c] = (1.0 - xi) * a[c] + xi * b[c];
    return potential.value(sys, p.data());
  };
  double err = 0.0;
  for (std::size_t s = 0; s < path.segments(); ++s) {
    const auto& a = path.nodes[s];
    const auto& b = path.nodes[s + 1];
    const double coarse = 0.5 * (at(a, b, kXi1) + at(a, b, kXi2));
    double fine = 0.0;
    for (int j = 0; j < 4; ++j) {
      fine += 0.125 * (at(a, b, (j + kXi1) / 4.0) + at(a, b, (j + kXi2) / 4.0));
    }
    const double e = (path.times[s + 1] - path.times[s]) * std::abs(coarse - fine);
    if (std::isfinite(e)) err += e;
  }
  return err;
}

std::vector<double> segment_energies(const MassSystem& sys, const DiscretePath& path,
                                     const PotentialModel& potential) {
  validate_path(sys, path);
  std::vector<double> u(path.size());
  for (std::size_t k = 0; k < path.size(); ++k) u[k] = potential.value(sys, path.nodes[k].data().data());
  std::vector<double> e(path.segments());
  for (std::size_t s = 0; s < path.segments(); ++s) {
    const double dt = path.times[s + 1] - path.times[s];
    const Configuration v = (path.nodes[s + 1] - path.nodes[s]) * (1.0 / dt);
    e[s] = 0.5 * cs::twice_kinetic(sys, v) - 0.5 * (u[s] + u[s + 1]);
  }
  return e;
}

double energy_drift(const MassSystem& sys, const DiscretePath& path,
                    const PotentialModel& potential) {
  const std::vector<double> e = segment_energies(sys, path, potential);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s = 1; s + 1 < e.size(); ++s) {
    if (!std::isfinite(e[s])) continue;
    lo = std::min(lo, e[s]);
    hi = std::max(hi, e[s]);
  }
  return hi >= lo ? hi - lo : 0.0;
}

Configuration sample_linear(const DiscretePath& path, double t) {
  if (path.times.empty()) throw InputError("sample: empty path");
  if (t <= path.times.front()) return path.nodes.front();
  if (t >= path.times.back()) return path.nodes.back();
  const auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - path.times.begin()) - 1;
  const double w = (t - path.times[k]) / (path.times[k + 1] - path.times[k]);
  return path.nodes[k] * (1.0 - w) + path.nodes[k + 1] * w;
}

DiscretePath resample_linear(const DiscretePath& path, const std::vector<double>& times) {
  DiscretePath out;
  out.times = times;
  out.fix_start = path.fix_start;
  out.fix_end = path.fix_end;
  out.nodes.reserve(times.size());
  for (double t : times) out.nodes.push_back(sample_linear(path, t));
  return out;
}

DiscretePath rescale_path(const DiscretePath& path, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("rescale: lambda must be positive");
  DiscretePath out = path;
  const double f = std::pow(lambda, 2.0 / 3.0);
  for (double& t : out.times) t *= lambda;
  for (auto& node : out.nodes) node *= f;
  return out;
}

MinimizeReport minimize_path(const MassSystem& sys, const DiscretePath& initial,
                             const MinimizeOptions& options) {
  validate_path(sys, initial);
  if (!initial.fix_start || !initial.fix_end) {
    throw InputError("minimize: both endpoints must be fixed");
  }
  const std::size_t D = sys.size();
  const std::size_t nodes = initial.size();
  const std::size_t interior = nodes - 2;
  const int d = sys.dim();

  std::vector<double> w(D);
  for (std::size_t c = 0; c < D; ++c) w[c] = std::sqrt(sys.mass(static_cast<int>(c) / d));

  std::vector<double> q = flatten(initial);
  std::vector<double> grad(q.size());
  Evaluator eval(sys, options.potential, initial.times);

  auto unpack = [&](const Eigen::VectorXd& y) {
    for (std::size_t k = 0; k < interior; ++k)
      for (std::size_t c = 0; c < D; ++c) q[(k + 1) * D + c] = y[k * D + c] / w[c];
  };
  Eigen::VectorXd y0(static_cast<Eigen::Index>(interior * D));
  for (std::size_t k = 0; k < interior; ++k)
    for (std::size_t c = 0; c < D; ++c) y0[k * D + c] = q[(k + 1) * D + c] * w[c];

  auto objective = [&](const Eigen::VectorXd& y, Eigen::VectorXd& g) {
    unpack(y);
    std::fill(grad.begin(), grad.end(), 0.0);
    const double f = eval(q.data(), grad.data());
    for (std::size_t k = 0; k < interior; ++k)
      for (std::size_t c = 0; c < D; ++c) g[k * D + c] = grad[(k + 1) * D + c] / w[c];
    return f;
  };

  // Kinetic Hessian in mass-scaled variables: tridiagonal over interior
  // nodes, identical for every coordinate. Factor once (Thomas algorithm).
  std::vector<double> diag(interior), off(interior), cprime(interior), denom(interior);
  for (std::size_t k = 0; k < interior; ++k) {
    const double left = initial.times[k + 1] - initial.times[k];
    const double right = initial.times[k + 2] - initial.times[k + 1];
    diag[k] = 1.0 / left + 1.0 / right;
    off[k] = -1.0 / right;
  }
  for (std::size_t k = 0; k < interior; ++k) {
    denom[k] = diag[k] - (k > 0 ? off[k - 1] * cprime[k - 1] : 0.0);
    cprime[k] = off[k] / denom[k];
  }
  auto precondition = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd z(v.size());
    for (std::size_t c = 0; c < D; ++c) {
      double prev = 0.0;
      for (std::size_t k = 0; k < interior; ++k) {
        prev = (v[k * D + c] - (k > 0 ? off[k - 1] * prev : 0.0)) / denom[k];
        z[k * D + c] = prev;
      }
      for (std::size_t k = interior - 1; k-- > 0;) z[k * D + c] -= cprime[k] * z[(k + 1) * D + c];
    }
    return z;
  };

  const double floor = options.separation_floor * path_scale(sys, initial);
  auto feasible = [&](const Eigen::VectorXd& y) {
    unpack(y);
    return interior_separation(sys, options.potential, q, nodes) >= floor;
  };

  MinimizeReport report;
  if (interior == 0) {
    report.path = initial;
    report.action = eval(q.data(), nullptr);
    report.converged = std::isfinite(report.action);
    report.min_separation = std::numeric_limits<double>::infinity();
    report.message = "no interior nodes";
    return report;
  }

  lbfgs::Options lo;
  lo.memory = options.memory;
  lo.max_iterations = options.max_iterations;
  lo.tol = options.tol;
  const lbfgs::Result r = lbfgs::minimize(objective, y0, lo, precondition, feasible);

  unpack(r.x);
  report.path = initial;
  for (std::size_t k = 0; k < interior; ++k) {
    auto& node = report.path.nodes[k + 1];
    std::copy(q.begin() + (k + 1) * D, q.begin() + (k + 2) * D, node.data().begin());
  }
  report.action = r.f;
  report.grad_norm = r.grad_norm;
  report.iterations = r.iterations;
  report.converged = r.converged && std::isfinite(r.f);
  report.min_separation = interior_separation(sys, options.potential, q, nodes);
  report.message = r.stop_reason;
  return report;
}

MinimizeReport minimize_fixed_endpoints(const MassSystem& sys, const Configuration& x_start,
                                        const Configuration& x_end, double T,
                                        const MinimizeOptions& options) {
  cs::check_shape(sys, x_start);
  cs::check_shape(sys, x_end);
  if (!(T > 0.0)) throw DomainError("minimize: T must be positive");
  if (options.inits.empty()) throw InputError("minimize: no initialization given");

  const std::vector<double> times = make_grid(0.0, T, options.grid);
  auto initial_path = [&](MinimizeOptions::Init init) {
    DiscretePath path;
    path.times = times;
    path.nodes.reserve(times.size());
    switch (init) {
      case MinimizeOptions::Init::StraightHomotopy:
        for (double t : times) path.nodes.push_back(x_start + (x_end - x_start) * (t / T));
        break;
      case MinimizeOptions::Init::PowerHomotopy:
        for (double t : times)
          path.nodes.push_back(x_start + (x_end - x_start) * std::pow(t / T, 2.0 / 3.0));
        break;
      case MinimizeOptions::Init::TestPath: {
        if (!options.test_path_direction) throw InputError("minimize: test path needs a direction x0'");
        const double R = std::max({cs::norm(sys, x_start), cs::norm(sys, x_end), 1e-300});
        const TestPath tp = build_test_path(sys, x_start, x_end, R, T, *options.test_path_direction);
        path = resample_linear(tp.path, times);
        break;
      }
      case MinimizeOptions::Init::Provided:
        if (!options.warm_start) throw InputError("minimize: provided init needs a warm-start path");
        path = resample_linear(*options.warm_start, times);
        break;
    }
    path.fix_start = path.fix_end = true;
    path.nodes.front() = x_start;
    path.nodes.back() = x_end;
    return path;
  };

  std::vector<MinimizeReport> reports(options.inits.size());
  std::vector<bool> ok(options.inits.size(), false);
  std::vector<std::string> errors(options.inits.size());
  parallel_for(options.inits.size(), options.jobs, [&](std::size_t i) {
    try {
      reports[i] = minimize_path(sys, initial_path(options.inits[i]), options);
      reports[i].init = init_name(options.inits[i]);
      ok[i] = std::isfinite(reports[i].action);
      if (!ok[i]) errors[i] = reports[i].message;
    } catch (const DomainError& e) {
      errors[i] = e.what();
    }
  });

  const MinimizeReport* best = nullptr;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!ok[i]) continue;
    const auto& r = reports[i];
    if (best == nullptr || (r.converged && !best->converged) ||
        (r.converged == best->converged && r.action < best->action)) {
      best = &r;
    }
  }
  if (best == nullptr) {
    std::string msg = "minimize: every start failed";
    for (std::size_t i = 0; i < errors.size(); ++i) {
      msg += std::string("; ") + init_name(options.inits[i]) + ": " + errors[i];
    }
    throw MinimizeFailure(msg);
  }
  return *best;
}

SundmanCheck sundman_lower_bound_check(const MassSystem& sys, const CentralConfig& cc,
                                       const MinimizeReport& report) {
  const auto& path = report.path;
  validate_path(sys, path);
  SundmanCheck out;
  const double a = cs::norm(sys, path.nodes.front());
  const double b = cs::norm(sys, path.nodes.back());
  out.kepler_action = kepler::action_between(a, b, path.duration(), cc.u0);
  out.slack = quadrature_error_estimate(sys, path);
  out.margin = report.action - out.kepler_action;
  out.holds = out.margin >= -out.slack;
  return out;
}

}  // namespace action
}  // namespace parabolica
