#include "parabolica/kepler1d.hpp"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "parabolica/errors.hpp"
#include "parabolica/quadrature.hpp"

namespace parabolica::kepler {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesRadius = 0.125;
constexpr std::uintmax_t kMaxRootIterations = 200;

// tau(z) = int_0^1 sqrt(w / (1 + z w)) dw and sigma(z) = int_0^1 sqrt((1 + z w) / w) dw,
// z > -1. With z = h x / u0 they give the time and the radial action from 0
// to x at energy h:
//   t0(x) = x^{3/2} / sqrt(2 u0) * tau(z),   a0(x) = sqrt(2 u0 x) * sigma(z).
// Near z = 0 (parabolic energy) both are evaluated by their binomial series.
double tau_series(double z) {
  double coeff = 1.0;  // binom(-1/2, k)
  double zk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double term = coeff * zk / (k + 1.5);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    coeff *= (-0.5 - k) / (k + 1);
    zk *= z;
  }
  return sum;
}

double sigma_series(double z) {
  double coeff = 1.0;  // binom(1/2, k)
  double zk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    const double term = coeff * zk / (k + 0.5);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    coeff *= (0.5 - k) / (k + 1);
    zk *= z;
  }
  return sum;
}

// Closed forms for y in [0, 1]. The complements take w = 1 - y so that radii
// close to the apex keep their relative precision.
double j_closed(double y) { return std::asin(std::sqrt(y)) + std::sqrt(y * (1.0 - y)); }
double h_complement(double w) { return std::asin(std::sqrt(w)) + std::sqrt(w * (1.0 - w)); }
double j_complement(double w) { return std::asin(std::sqrt(w)) - std::sqrt(w * (1.0 - w)); }

double tau(double z) {
  if (std::abs(z) < kSeriesRadius) return tau_series(z);
  if (z > 0.0) return integral_E(z) / (z * std::sqrt(z));
  const double y = std::min(-z, 1.0);
  return integral_H(y) / (y * std::sqrt(y));
}

double sigma(double z) {
  if (std::abs(z) < kSeriesRadius) return sigma_series(z);
  if (z > 0.0) return integral_F(z) / std::sqrt(z);
  const double y = std::min(-z, 1.0);
  return j_closed(y) / std::sqrt(y);
}

double time_from_origin(double x, double h, double u0) {
  if (x == 0.0) return 0.0;
  return x * std::sqrt(x) / std::sqrt(2.0 * u0) * tau(h * x / u0);
}

double action_from_origin(double x, double h, double u0) {
  if (x == 0.0) return 0.0;
  return std::sqrt(2.0 * u0 * x) * sigma(h * x / u0);
}

// Time and radial action from radius c (1 - w) up to the apex c of an
// energy -u0/c arc.
double time_to_apex_w(double c, double w, double u0) {
  return c * std::sqrt(c) / std::sqrt(2.0 * u0) * h_complement(std::clamp(w, 0.0, 1.0));
}

double action_to_apex_w(double c, double w, double u0) {
  return std::sqrt(2.0 * u0 * c) * j_complement(std::clamp(w, 0.0, 1.0));
}

double time_to_apex(double x, double c, double u0) { return time_to_apex_w(c, (c - x) / c, u0); }

void validate(double a, double b, double s, double u0) {
  if (!(u0 > 0.0) || !std::isfinite(u0)) throw DomainError("kepler: u0 must be positive");
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("kepler: start radius must be >= 0");
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("kepler: end radius must be > 0");
  if (a > b) throw DomainError("kepler: requires a <= b");
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("kepler: transfer time must be > 0");
}

template <class Fn>
double bracketed_root(Fn f, double lo, double hi, double f_lo, double f_hi, const char* what) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw SolverError(std::string(what) + ": root not bracketed (f(lo)=" + std::to_string(f_lo) +
                      ", f(hi)=" + std::to_string(f_hi) + ")");
  }
  std::uintmax_t iterations = kMaxRootIterations;
  auto [x0, x1] = boost::math::tools::toms748_solve(
      f, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iterations);
  if (iterations >= kMaxRootIterations) {
    throw SolverError(std::string(what) + ": root finder exceeded iteration budget");
  }
  return 0.5 * (x0 + x1);
}

// Shared branch logic: `monotone_time(h)` and `apex_time(c)` are the two
// time functions; the closed-form and quadrature routes plug in their own.
template <class MonotoneTime, class ApexTime>
std::pair<double, bool> solve_branch(double a, double b, double s, double u0, double sbar_ab,
                                     MonotoneTime monotone_time, ApexTime apex_time) {
  if (s <= sbar_ab) {
    const double lo = -u0 / b;
    const double hi = (b - a) * (b - a) / (2.0 * s * s);
    auto f = [&](double h) { return monotone_time(h) - s; };
    return {bracketed_root(f, lo, hi, sbar_ab - s, f(hi), "kepler monotone branch"), true};
  }
  auto f = [&](double c) { return apex_time(c) - s; };
  const double lo = b;
  double hi = 2.0 * b;
  double f_hi = f(hi);
  for (int k = 0; k < 2000 && f_hi < 0.0; ++k) {
    hi *= 2.0;
    f_hi = f(hi);
  }
  const double c = bracketed_root(f, lo, hi, sbar_ab - s, f_hi, "kepler apex branch");
  return {-u0 / c, false};
}

}  // namespace

double integral_E(double x) {
  if (!(x >= 0.0)) throw DomainError("E: argument must be >= 0");
  if (x < kSeriesRadius) return x * std::sqrt(x) * tau_series(x);
  return std::sqrt(x * (1.0 + x)) - std::asinh(std::sqrt(x));
}

double integral_F(double x) {
  if (!(x >= 0.0)) throw DomainError("F: argument must be >= 0");
  return std::sqrt(x * (1.0 + x)) + std::asinh(std::sqrt(x));
}

double integral_H(double x) {
  if (!(x >= 0.0) || x > 1.0) throw DomainError("H: argument must lie in [0, 1]");
  if (x < kSeriesRadius) return x * std::sqrt(x) * tau_series(-x);
  return std::asin(std::sqrt(x)) - std::sqrt(x * (1.0 - x));
}

double sbar(double a, double b, double u0) {
  if (!(u0 > 0.0)) throw DomainError("sbar: u0 must be positive");
  if (!(a >= 0.0) || !(a < b)) throw DomainError("sbar: requires 0 <= a < b");
  return time_to_apex(a, b, u0);
}

double transfer_time(double a, double b, double h, double u0, bool monotone) {
  if (monotone) {
    if (h < -u0 / b) throw DomainError("transfer_time: energy below -u0/b");
    if (h == -u0 / b) return time_to_apex(a, b, u0);
    return time_from_origin(b, h, u0) - time_from_origin(a, h, u0);
  }
  if (!(h < 0.0) || h < -u0 / b) throw DomainError("transfer_time: apex branch needs -u0/b <= h < 0");
  const double c = -u0 / h;
  return time_to_apex(a, c, u0) + time_to_apex(b, c, u0);
}

// Arcs with energy near -u0/b are parametrized by q = c - b, with apex (or
// virtual apex, on the monotone branch) c = b + q and h = -u0 / c. The time
// functions are smooth in q at q = 0, where they are not in h.
KeplerArc solve_energy_h(double a, double b, double s, double u0) {
  validate(a, b, s, u0);
  const double sb = a < b ? sbar(a, b, u0) : 0.0;
  const double gap = b - a;
  auto leg_a = [&](double q) { return (gap + q) / (b + q); };
  auto leg_b = [&](double q) { return q / (b + q); };
  auto apex_time = [&](double q) {
    return time_to_apex_w(b + q, leg_a(q), u0) + time_to_apex_w(b + q, leg_b(q), u0);
  };
  auto bound_time = [&](double q) {
    return time_to_apex_w(b + q, leg_a(q), u0) - time_to_apex_w(b + q, leg_b(q), u0);
  };
  auto origin_time = [&](double h) { return time_from_origin(b, h, u0) - time_from_origin(a, h, u0); };

  KeplerArc arc{a, b, s, u0, 0.0, true, std::nullopt, 0.0, 0.0};
  if (s > sb) {
    auto f = [&](double q) { return apex_time(q) - s; };
    double hi = b;
    double f_hi = f(hi);
    for (int k = 0; k < 2000 && f_hi < 0.0; ++k) {
      hi *= 2.0;
      f_hi = f(hi);
    }
    const double q = bracketed_root(f, 0.0, hi, sb - s, f_hi, "kepler apex branch");
    const double c = b + q;
    arc.monotone = false;
    arc.h = -u0 / c;
    arc.apex = c;
    arc.action = action_to_apex_w(c, leg_a(q), u0) + action_to_apex_w(c, leg_b(q), u0) - arc.h * s;
    arc.time_residual = std::abs(apex_time(q) - s);
    return arc;
  }
  // Monotone: q on [0, b] (apex within 2b), otherwise h directly.
  if (a < b && bound_time(b) <= s) {
    auto f = [&](double q) { return bound_time(q) - s; };
    const double q = bracketed_root(f, 0.0, b, sb - s, f(b), "kepler monotone branch");
    const double c = b + q;
    arc.h = -u0 / c;
    arc.action = action_to_apex_w(c, leg_a(q), u0) - action_to_apex_w(c, leg_b(q), u0) - arc.h * s;
    arc.time_residual = std::abs(bound_time(q) - s);
    return arc;
  }
  const double lo = -0.5 * u0 / b;
  const double hi = gap * gap / (2.0 * s * s);
  auto f = [&](double h) { return origin_time(h) - s; };
  arc.h = bracketed_root(f, lo, hi, bound_time(b) - s, f(hi), "kepler monotone branch");
  arc.action = action_from_origin(b, arc.h, u0) - action_from_origin(a, arc.h, u0) - arc.h * s;
  arc.time_residual = std::abs(origin_time(arc.h) - s);
  return arc;
}

double kepler_action_S(double a, double b, double s, double u0) {
  return solve_energy_h(a, b, s, u0).action;
}

double action_between(double r1, double r2, double s, double u0) {
  if (r1 > r2) std::swap(r1, r2);
  return kepler_action_S(r1, r2, s, u0);
}

double energy_between(double r1, double r2, double s, double u0) {
  if (r1 > r2) std::swap(r1, r2);
  return solve_energy_h(r1, r2, s, u0).h;
}

KeplerArc solve_by_quadrature(double a, double b, double s, double u0) {
  validate(a, b, s, u0);
  using quadrature::integrate_lower_sqrt;
  using quadrature::integrate_upper_sqrt;

  auto speed = [u0](double h) {
    return [u0, h](double u) { return std::sqrt(2.0 * std::max(h + u0 / u, 0.0)); };
  };
  auto monotone_time = [&](double h) {
    auto inv = [v = speed(h)](double u) { return 1.0 / v(u); };
    const double m = 0.5 * (a + b);
    return integrate_lower_sqrt(inv, a, m).value + integrate_upper_sqrt(inv, m, b).value;
  };
  // From x up to the apex c, with u = c - w^2 the time integrand is smooth.
  auto apex_leg_time = [u0](double x, double c) {
    auto f = [u0, c](double w) { return 2.0 * std::sqrt((c - w * w) * c / (2.0 * u0)); };
    return quadrature::integrate(f, 0.0, std::sqrt(c - x)).value;
  };
  auto apex_time = [&](double c) { return apex_leg_time(a, c) + apex_leg_time(b, c); };
  auto apex_leg_action = [u0](double x, double c) {
    auto g = [u0, c](double u) { return std::sqrt(2.0 * u0 * std::max(c - u, 0.0) / (u * c)); };
    const double m = 0.5 * (x + c);
    return integrate_lower_sqrt(g, x, m).value + integrate_upper_sqrt(g, m, c).value;
  };

  const double sb = a < b ? apex_leg_time(a, b) : 0.0;
  const auto [h, monotone] = solve_branch(a, b, s, u0, sb, monotone_time, apex_time);

  KeplerArc arc{a, b, s, u0, h, monotone, std::nullopt, 0.0, 0.0};
  if (monotone) {
    const auto v = speed(h);
    const double m = 0.5 * (a + b);
    const double radial = integrate_lower_sqrt(v, a, m).value + integrate_upper_sqrt(v, m, b).value;
    arc.action = radial - h * s;
    arc.time_residual = std::abs(monotone_time(h) - s);
  } else {
    const double c = -u0 / h;
    arc.apex = c;
    arc.action = apex_leg_action(a, c) + apex_leg_action(b, c) - h * s;
    arc.time_residual = std::abs(apex_time(c) - s);
  }
  return arc;
}

double G_of_r(double r, double u0) {
  if (!(r > 0.0)) throw DomainError("G: r must be positive");
  return kepler_action_S(0.0, r, 1.0, u0) - std::sqrt(8.0 * u0 * r);
}

double G_prime(double r, double u0) {
  const KeplerArc arc = solve_energy_h(0.0, r, 1.0, u0);
  const double arrival = std::sqrt(2.0 * std::max(arc.h + u0 / r, 0.0));
  const double homothetic = std::sqrt(2.0 * u0 / r);
  return (arc.monotone ? arrival : -arrival) - homothetic;
}

double G_second_fd(double r, double u0, double step) {
  if (!(step > 0.0) || step >= r) throw DomainError("G'': step must lie in (0, r)");
  return (G_of_r(r + step, u0) - 2.0 * G_of_r(r, u0) + G_of_r(r - step, u0)) / (step * step);
}

double kepler_excess_N(double r, double rprime, double tau_, double T, double t, double u0) {
  if (!(tau_ >= 0.0 && tau_ < T && T < t)) throw DomainError("N: requires 0 <= tau < T < t");
  if (!(r > 0.0) || !(rprime > 0.0)) throw DomainError("N: radii must be positive");
  return kepler_action_S(0.0, r, T + tau_, u0) + action_between(r, rprime, t - T, u0) -
         kepler_action_S(0.0, rprime, t - tau_, u0);
}

double script_G(double r, double s, double u0) {
  if (!(s > 1.0)) throw DomainError("script_G: s must exceed 1");
  const double alpha = std::cbrt(4.5 * u0);
  return kepler_excess_N(r, alpha * std::pow(s, 2.0 / 3.0), 0.0, 1.0, s, u0);
}

}  // namespace parabolica::kepler
