#pragma once

// The Kepler problem on the half-line, r'' = -u0 / r^2, as an exact
// two-point boundary-value oracle.
//
// For 0 <= a <= b and s > 0 there is exactly one solution joining a to b in
// time s. Its energy h = r'^2/2 - u0/r is at least -u0/b. The solution is
// monotone when s <= sbar(a, b) (the transfer time at h = -u0/b); otherwise
// it rises from a to the apex -u0/h and falls back to b. All integrals are
// evaluated in closed form through the functions E, F, H below.

#include <optional>

namespace parabolica::kepler {

/// E(x) = int_0^x sqrt(s/(1+s)) ds = sqrt(x(1+x)) - asinh(sqrt x), x >= 0.
double integral_E(double x);
/// F(x) = int_0^x sqrt((s+1)/s) ds = sqrt(x(1+x)) + asinh(sqrt x), x >= 0.
double integral_F(double x);
/// H(x) = int_0^x sqrt(v/(1-v)) dv = asin(sqrt x) - sqrt(x(1-x)), 0 <= x <= 1.
double integral_H(double x);

/// Time taken by the energy -u0/b solution to go from a to b. Requires a < b.
double sbar(double a, double b, double u0);

struct KeplerArc {
  double a = 0.0;
  double b = 0.0;
  double s = 0.0;
  double u0 = 0.0;
  double h = 0.0;
  bool monotone = true;
  std::optional<double> apex;  // -u0/h for non-monotone arcs
  double action = 0.0;         // S(a, b; s)
  double time_residual = 0.0;  // |transfer time(h) - s|
};

/// Unique arc joining a to b (0 <= a <= b, b > 0) in time s > 0.
KeplerArc solve_energy_h(double a, double b, double s, double u0);

/// S(a, b; s): the action int (r'^2/2 + u0/r) dt of the unique arc.
double kepler_action_S(double a, double b, double s, double u0);

/// Same quantity computed by adaptive quadrature of the time and action
/// integrals (with its own root solve). Independent cross-check route.
KeplerArc solve_by_quadrature(double a, double b, double s, double u0);

/// S for unordered endpoints; the problem is time-reversible.
double action_between(double r1, double r2, double s, double u0);
/// h for unordered endpoints.
double energy_between(double r1, double r2, double s, double u0);

/// Transfer time between radii a <= b at energy h along the monotone
/// branch (h > -u0/b) or via the apex -u0/h (non-monotone, -u0/b < h < 0).
double transfer_time(double a, double b, double h, double u0, bool monotone);

/// G(r) = S(0, r; 1) - beta0 sqrt(r).
double G_of_r(double r, double u0);
/// Branch formula for G'(r).
double G_prime(double r, double u0);
/// Central second difference of G.
double G_second_fd(double r, double u0, double step = 1e-4);

/// N(r, r'; tau, T, t) = S(0, r; T + tau) + S(r, r'; t - T) - S(0, r'; t - tau),
/// 0 <= tau < T < t.
double kepler_excess_N(double r, double rprime, double tau, double T, double t, double u0);

/// script-G(r, s) = N(r, alpha s^{2/3}; 0, 1, s), s > 1.
double script_G(double r, double s, double u0);

}  // namespace parabolica::kepler
