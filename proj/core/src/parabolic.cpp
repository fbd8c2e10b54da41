#include "parabolica/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parabolica/errors.hpp"
#include "parabolica/parallel.hpp"

namespace parabolica::parabolic {

namespace cs = configspace;

std::vector<double> time_sequence(const ParabolicOptions& options) {
  if (!options.t_seq.empty()) return options.t_seq;
  if (!(options.t1 > 0.0) || options.K < 1) throw InputError("t_seq: need t1 > 0 and K >= 1");
  std::vector<double> t;
  for (int n = 1; n <= options.K; ++n) t.push_back(options.t1 * std::ldexp(1.0, n));
  return t;
}

Configuration interpolate(const DiscretePath& path, double t) {
  const std::size_t n = path.size();
  if (n == 0) throw InputError("interpolate: empty path");
  if (t <= path.times.front()) return path.nodes.front();
  if (t >= path.times.back()) return path.nodes.back();
  if (n < 4) return action::sample_linear(path, t);
  const auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - path.times.begin()) - 1;
  const std::size_t i0 = std::min(k > 0 ? k - 1 : 0, n - 4);
  auto tau = [](double s) { return std::cbrt(s * s); };
  double x[4];
  for (int j = 0; j < 4; ++j) x[j] = tau(path.times[i0 + j]);
  const double z = tau(t);
  Configuration out = path.nodes[i0].zeros_like();
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    for (int l = 0; l < 4; ++l) {
      if (l != j) w *= (z - x[l]) / (x[j] - x[l]);
    }
    out += path.nodes[i0 + j] * w;
  }
  return out;
}

DiscretePath restrict_path(const DiscretePath& path, double T) {
  if (!(T > path.times.front())) throw DomainError("restrict: window ends before the path starts");
  if (T > path.times.back() * (1.0 + 1e-12)) throw DomainError("restrict: window exceeds the path");
  DiscretePath out;
  out.fix_start = path.fix_start;
  out.fix_end = path.fix_end;
  for (std::size_t k = 0; k < path.size() && path.times[k] < T; ++k) {
    out.times.push_back(path.times[k]);
    out.nodes.push_back(path.nodes[k]);
  }
  if (out.times.back() < T) {
    out.nodes.push_back(interpolate(path, T));
    out.times.push_back(T);
  }
  return out;
}

std::vector<SequenceEntry> minimizer_sequence(const MassSystem& sys, const CentralConfig& cc,
                                              const Configuration& x_i,
                                              const ParabolicOptions& options) {
  cs::check_shape(sys, x_i);
  if (cs::norm(sys, x_i) == 0.0) throw DomainError("minimizer_sequence: x_i must be nonzero");
  const std::vector<double> t_seq = time_sequence(options);
  for (std::size_t n = 0; n < t_seq.size(); ++n) {
    if (!(t_seq[n] > 0.0) || (n > 0 && !(t_seq[n] > t_seq[n - 1]))) {
      throw InputError("t_seq must be positive and strictly increasing");
    }
  }

  MinimizeOptions mopts;
  mopts.tol = options.tol;
  mopts.max_iterations = options.max_iterations;
  GridSpec grid;
  grid.segments = options.segments;
  grid.grading = GridSpec::Grading::Start;
  grid.power = options.grid_power;
  grid.offset = options.grid_offset;

  std::vector<SequenceEntry> entries(t_seq.size());
  auto run = [&](std::size_t n, const DiscretePath* previous) {
    SequenceEntry& e = entries[n];
    e.t = t_seq[n];
    try {
      DiscretePath init;
      init.times = action::make_grid(0.0, e.t, grid);
      for (double t : init.times) {
        if (previous != nullptr && t <= previous->end_time()) {
          init.nodes.push_back(interpolate(*previous, t));
        } else if (previous != nullptr) {
          init.nodes.push_back(central::homothetic_parabolic_gamma0(cc, t));
        } else {
          init.nodes.push_back(central::homothetic_parabolic_gamma0(cc, t) + x_i * (1.0 - t / e.t));
        }
      }
      init.nodes.front() = x_i;
      init.nodes.back() = central::homothetic_parabolic_gamma0(cc, e.t);
      e.report = action::minimize_path(sys, init, mopts);
      e.ok = std::isfinite(e.report.action);
      if (!e.ok) e.error = e.report.message;
    } catch (const std::exception& ex) {
      e.ok = false;
      e.error = ex.what();
    }
  };

  if (options.warm_start) {
    const DiscretePath* previous = nullptr;
    for (std::size_t n = 0; n < t_seq.size(); ++n) {
      run(n, previous);
      if (entries[n].ok) previous = &entries[n].report.path;
    }
  } else {
    parallel_for(t_seq.size(), options.jobs, [&](std::size_t n) { run(n, nullptr); });
  }
  return entries;
}

LimitResult extract_limit_path(const MassSystem& sys, const std::vector<SequenceEntry>& entries,
                               const std::vector<double>& windows, double window_ratio) {
  if (!(window_ratio > 1.0)) throw InputError("window ratio must exceed 1");
  std::vector<const SequenceEntry*> ok;
  for (const auto& e : entries) {
    if (e.ok) ok.push_back(&e);
  }
  if (ok.size() < 2) throw InputError("extract_limit_path: need at least two successful entries");

  LimitResult out;
  const DiscretePath& last = ok.back()->report.path;
  std::vector<double> sorted = windows;
  std::sort(sorted.begin(), sorted.end());
  for (double T : sorted) {
    if (!(T > 0.0)) throw InputError("windows must be positive");
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < ok.size(); ++j) {
      if (T > ok[j]->t / window_ratio) continue;
      ConvergenceRow row{T, ok[j]->t, ok[j + 1]->t, 0.0};
      const DiscretePath grid = restrict_path(last, T);
      for (double t : grid.times) {
        const Configuration diff =
            interpolate(ok[j]->report.path, t) - interpolate(ok[j + 1]->report.path, t);
        row.sup_diff = std::max(row.sup_diff, cs::norm(sys, diff));
      }
      if (row.sup_diff > previous * (1.0 + 1e-9) + 1e-14) {
        out.converging = false;
        out.warning = "sup-norm differences do not decrease on window " + std::to_string(T);
      }
      previous = row.sup_diff;
      out.table.push_back(row);
    }
  }

  double T_lim = ok.back()->t / window_ratio;
  if (!sorted.empty()) {
    double best = 0.0;
    for (double T : sorted) {
      if (T <= T_lim) best = T;
    }
    if (best > 0.0) T_lim = best;
  }
  out.limit = restrict_path(last, T_lim);
  return out;
}

std::vector<DiagnosticRow> parabolic_diagnostics(const MassSystem& sys, const CentralConfig& cc,
                                                 const DiscretePath& limit) {
  action::validate_path(sys, limit);
  std::vector<DiagnosticRow> rows;
  for (std::size_t k = 1; k + 1 < limit.size(); ++k) {
    const double t = limit.times[k];
    if (!(t > 0.0)) continue;
    const Configuration& q = limit.nodes[k];
    const double h0 = t - limit.times[k - 1];
    const double h1 = limit.times[k + 1] - t;
    const Configuration v = ((limit.nodes[k + 1] - q) * (h0 * h0) + (q - limit.nodes[k - 1]) * (h1 * h1)) *
                            (1.0 / (h0 * h1 * (h0 + h1)));
    DiagnosticRow r;
    r.t = t;
    const double norm = cs::norm(sys, q);
    r.r_over_t23 = norm / std::cbrt(t * t);
    r.angle = cs::angle_between(sys, q, cc.x0);
    r.angle_orbit = central::orbit_angle(sys, q, cc.x0);
    r.I_over_t43 = cs::inertia(sys, q) / std::pow(t, 4.0 / 3.0);
    r.speed = std::sqrt(cs::twice_kinetic(sys, v));
    r.energy = 0.5 * r.speed * r.speed - cs::potential(sys, q);
    r.Utilde = cs::normalized_potential(sys, q);
    r.gradUtilde = cs::norm(sys, cs::grad_normalized_potential(sys, cs::normalize(sys, q)));
    rows.push_back(r);
  }
  return rows;
}

double window_median(const std::vector<DiagnosticRow>& rows, double lo, double hi,
                     double (*column)(const DiagnosticRow&)) {
  std::vector<double> v;
  for (const auto& r : rows) {
    if (r.t >= lo && r.t <= hi) v.push_back(column(r));
  }
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

GrowthFit action_growth(const MassSystem& sys, const DiscretePath& path,
                        const std::vector<double>& windows) {
  GrowthFit fit;
  for (double T : windows) {
    if (T > path.end_time() * (1.0 + 1e-12) || !(T > path.start_time())) continue;
    const double a = action::discrete_action(sys, restrict_path(path, T));
    fit.windows.push_back(T);
    fit.actions.push_back(a);
    fit.coefficient = std::max(fit.coefficient, a / std::cbrt(T));
  }
  const std::size_t n = fit.windows.size();
  if (n < 2) throw InputError("action_growth: need at least two admissible windows");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(fit.windows[i]);
    my += std::log(fit.actions[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(fit.windows[i]) - mx;
    sxy += dx * (std::log(fit.actions[i]) - my);
    sxx += dx * dx;
  }
  fit.exponent = sxy / sxx;
  return fit;
}

double window_radius_bound(const MassSystem& sys, const DiscretePath& path, double T_min,
                           double T_max) {
  double best = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double t = path.times[k];
    if (t < T_min || t > T_max || !(t > 0.0)) continue;
    best = std::max(best, cs::norm(sys, path.nodes[k]) / std::cbrt(t * t));
  }
  return best;
}

}  // namespace parabolica::parabolic
