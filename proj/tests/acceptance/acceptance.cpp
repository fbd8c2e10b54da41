// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.
#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "parabolica/action.hpp"
#include "parabolica/central.hpp"
#include "parabolica/kepler1d.hpp"
#include "parabolica/lambert.hpp"
#include "parabolica/parabolic.hpp"
#include "parabolica/test_path.hpp"

using namespace parabolica;
namespace cs = parabolica::configspace;
namespace kp = parabolica::kepler;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CentralConfig equal_masses(const MassSystem& sys) {
  return central::find_minimizing_central_configuration(sys);
}

Configuration random_in_shell(const MassSystem& sys, std::mt19937_64& rng, double r) {
  return cs::normalize(sys, cs::random_configuration(sys, rng)) * r;
}

Outcome kepler_exactness() {
  double worst_h = 0.0, worst_s = 0.0, worst_g = 0.0, worst_g2 = 0.0;
  for (double u0 : {1.0 / std::sqrt(2.0), 1.0, 3.0, 7.5}) {
    const auto k = central::parabolic_constants(u0);
    worst_h = std::max(worst_h, std::abs(kp::solve_energy_h(0.0, k.alpha, 1.0, u0).h));
    worst_h = std::max(worst_h, std::abs(kp::solve_energy_h(0.0, k.beta, 1.0, u0).h + u0 / k.beta));
    for (double s : {1.0, 8.0, 27.0}) {
      const double S = kp::kepler_action_S(0.0, k.alpha * std::pow(s, 2.0 / 3.0), s, u0);
      worst_s = std::max(worst_s, rel(S, k.alpha0 * std::cbrt(s)));
    }
    worst_g = std::max(worst_g, std::abs(kp::G_of_r(k.alpha, u0)));
    const double g2 = 5.0 * std::sqrt(u0) / (std::sqrt(2.0) * std::pow(k.alpha, 1.5));
    worst_g2 = std::max(worst_g2, rel(kp::G_second_fd(k.alpha, u0), g2));
  }
  return {worst_h <= 1e-10 && worst_s <= 1e-8 && worst_g <= 1e-8 && worst_g2 <= 1e-4,
          fmt("max|h err| %.1e, max S rel %.1e, max|G(alpha)| %.1e, G'' rel %.1e", worst_h, worst_s,
              worst_g, worst_g2)};
}

Outcome scaling_laws() {
  const double lambda = 8.0, l23 = std::cbrt(lambda * lambda), l13 = std::cbrt(lambda);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_s = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double u0 = 0.5 + 4.0 * unit(rng);
    const double a = 3.0 * unit(rng), b = a + 0.01 + 3.0 * unit(rng), s = 0.1 + 5.0 * unit(rng);
    worst_s = std::max(worst_s, rel(kp::kepler_action_S(l23 * a, l23 * b, lambda * s, u0),
                                    l13 * kp::kepler_action_S(a, b, s, u0)));
  }
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  double worst_a = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Configuration x = random_in_shell(sys, rng, 0.6 + unit(rng));
    const Configuration y = random_in_shell(sys, rng, 0.6 + unit(rng));
    const auto base = action::minimize_fixed_endpoints(sys, x, y, 1.0);
    const auto big = action::minimize_fixed_endpoints(sys, x * l23, y * l23, lambda);
    worst_a = std::max(worst_a, rel(big.action / base.action, l13));
  }
  return {worst_s <= 1e-3 && worst_a <= 1e-3,
          fmt("S ratio rel %.1e (50 arcs), discrete action ratio rel %.1e (3 pairs)", worst_s, worst_a)};
}

Outcome ode_oracle() {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 3>;  // r, r', accumulated action
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int apex_arcs = 0;
  for (int i = 0; i < 20; ++i) {
    const double u0 = 0.5 + 2.5 * unit(rng);
    const double a = 0.1 + 2.0 * unit(rng);
    const double b = a + 0.05 + 3.0 * unit(rng);
    const double s = 0.2 + 6.0 * unit(rng);
    const auto arc = kp::solve_energy_h(a, b, s, u0);
    if (!arc.monotone) ++apex_arcs;
    State y{a, std::sqrt(2.0 * (arc.h + u0 / a)), 0.0};
    auto rhs = [u0](const State& q, State& dq, double) {
      dq[0] = q[1];
      dq[1] = -u0 / (q[0] * q[0]);
      dq[2] = 0.5 * q[1] * q[1] + u0 / q[0];
    };
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, y, 0.0, s, s * 1e-4);
    worst = std::max({worst, rel(y[0], b), rel(y[2], arc.action)});
  }
  return {worst <= 1e-6, fmt("max rel %.1e over 20 arcs (%d through an apex)", worst, apex_arcs)};
}

Outcome sundman_chain() {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = equal_masses(sys);
  const double alpha = cc.constants.alpha;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::array<double, 4> s_cycle{5.0, 20.0, 50.0, 200.0};
  int broken = 0, unconverged = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Configuration e = lambert::random_orthogonal_direction(sys, cc.x0, rng);
    const double angle = 0.5 * std::numbers::pi * unit(rng);
    const double r = alpha * (0.5 + 1.5 * unit(rng));
    const Configuration x = (cc.x0 * std::cos(angle) + e * std::sin(angle)) * r;
    const ExcessReport rep = lambert::excess_F(sys, cc, x, s_cycle[i % s_cycle.size()]);
    if (!rep.chain_ok) ++broken;
    if (!rep.converged) ++unconverged;
    worst_gap = std::max(worst_gap, rep.F0_val - rep.F_val - rep.slack);
  }
  double ray = 0.0;
  for (double s : {10.0, 100.0}) ray = std::max(ray, std::abs(lambert::excess_F0(sys, cc, cc.x0 * alpha, s)));
  return {broken == 0 && ray <= 1e-7,
          fmt("%d/100 chains broken (%d unconverged), worst F0-F-slack %.1e, |F0(alpha x0)| %.1e", broken,
              unconverged, worst_gap, ray)};
}

Outcome lambert_crosscheck() {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = equal_masses(sys);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MinimizeOptions opt;
  opt.grid.segments = 2000;
  opt.potential = PotentialModel::central_kepler(cc.u0);
  double worst = 0.0, worst_turn = 0.0;
  for (int i = 0; i < 10; ++i) {
    const Configuration x1 = random_in_shell(sys, rng, 0.5 + 1.5 * unit(rng));
    const Configuration x2 = random_in_shell(sys, rng, 0.5 + 1.5 * unit(rng));
    const double s = 0.5 + 2.5 * unit(rng);
    const auto rep = action::minimize_fixed_endpoints(sys, x1, x2, s, opt);
    worst = std::max(worst, rel(rep.action, lambert::kepler_central_action_A0(sys, x1, x2, s, cc.u0)));
    worst_turn = std::max(worst_turn, lambert::polar_angle_variation(sys, rep.path));
  }
  return {worst <= 1e-3 && worst_turn <= std::numbers::pi + 0.05,
          fmt("max rel %.1e, max angular variation %.4f", worst, worst_turn)};
}

Outcome test_path_certificate() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0, total = 0;
  double worst_ratio = 0.0;
  for (int n : {3, 4}) {
    const MassSystem sys(std::vector<double>(static_cast<std::size_t>(n), 1.0), 2);
    const CentralConfig cc = equal_masses(sys);
    for (int i = 0; i < 50; ++i, ++total) {
      const double R = 0.2 + 5.0 * unit(rng), T = 0.1 + 5.0 * unit(rng);
      const Configuration x = random_in_shell(sys, rng, R * unit(rng));
      const Configuration y = random_in_shell(sys, rng, R * unit(rng));
      const TestPath tp = build_test_path(sys, x, y, R, T, cc.x0);
      if (!tp.within_bound) ++violations;
      worst_ratio = std::max(worst_ratio, tp.action / tp.bound);
    }
  }
  return {violations == 0, fmt("%d/%d violations, max action/bound %.3f", violations, total, worst_ratio)};
}

Outcome localization() {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = equal_masses(sys);
  const LocalizationReport rep = lambert::verify_localization(sys, cc, {1e-3}, {1e3});
  const LocalizationCase& c = rep.cases.front();
  return {rep.passed && rep.violations.empty() && !c.outside_hypotheses && rep.samples >= 1000,
          fmt("%d samples, %zu violations, delta1 %.3g, delta2 %.3g, margins %.1e/%.1e/%.1e", rep.samples,
              rep.violations.size(), c.delta1, c.delta2, c.radial_margin, c.angular_margin, c.ball_margin)};
}

Outcome exact_parabolic() {
  const MassSystem sys({1.0, 1.0}, 2);
  const CentralConfig cc = equal_masses(sys);
  const double alpha = cc.constants.alpha;
  // x_i = gamma0(1), so the limit is gamma0(t + 1). The endpoint gamma0(t_n)
  // lags gamma0(t_n + 1), so t_n runs to 1024.
  ParabolicOptions opt;
  opt.K = 10;
  const auto seq = parabolic::minimizer_sequence(sys, cc, cc.x0 * alpha, opt);
  const bool all_ok = std::all_of(seq.begin(), seq.end(), [](const auto& e) { return e.ok; });
  const auto lim = parabolic::extract_limit_path(sys, seq, {1, 2, 4, 8, 16, 32, 64}, 16.0);
  const auto rows = parabolic::parabolic_diagnostics(sys, cc, lim.limit);
  double radius = 0.0, angle = 0.0, energy = 0.0;
  for (const auto& r : rows) {
    radius = std::max(radius, std::abs(r.r_over_t23 - alpha * std::pow(1.0 + 1.0 / r.t, 2.0 / 3.0)) / alpha);
    angle = std::max(angle, r.angle);
    energy = std::max(energy, std::abs(r.energy));
  }
  return {all_ok && !rows.empty() && radius <= 1e-3 && angle <= 1e-3 && energy <= 1e-3,
          fmt("limit on [0, %g]: max radius dev %.1e, angle %.1e, |H| %.1e", lim.limit.end_time(), radius,
              angle, energy)};
}

Outcome generic_parabolic() {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = equal_masses(sys);
  const double alpha = cc.constants.alpha;
  std::mt19937_64 rng(7);
  const Configuration x_i = random_in_shell(sys, rng, 0.2 * alpha);
  ParabolicOptions opt;
  opt.K = 8;  // t_n up to 256
  const auto seq = parabolic::minimizer_sequence(sys, cc, x_i, opt);
  const int ok = static_cast<int>(std::count_if(seq.begin(), seq.end(), [](const auto& e) { return e.ok; }));
  const auto lim = parabolic::extract_limit_path(sys, seq, {1, 2, 4, 8, 16, 32, 64}, 4.0);
  const auto rows = parabolic::parabolic_diagnostics(sys, cc, lim.limit);
  auto med = [&](double lo, double hi, double (*col)(const DiagnosticRow&)) {
    return parabolic::window_median(rows, lo, hi, col);
  };
  const double radius = std::abs(med(6.4, 64.0, [](const DiagnosticRow& r) { return r.r_over_t23; }) - alpha);
  const double angle = med(6.4, 64.0, [](const DiagnosticRow& r) { return r.angle_orbit; });
  const double h_prev = med(0.64, 6.4, [](const DiagnosticRow& r) { return std::abs(r.energy); });
  const double h_last = med(6.4, 64.0, [](const DiagnosticRow& r) { return std::abs(r.energy); });
  const auto growth = parabolic::action_growth(sys, lim.limit, {2, 4, 8, 16, 32, 64});
  const bool pass = ok == static_cast<int>(seq.size()) && radius < 0.05 * alpha && angle < 0.1 &&
                    h_last < h_prev && growth.exponent >= 0.25 && growth.exponent <= 0.45;
  return {pass, fmt("%d/%zu minimizers, |r/t^(2/3)-alpha| %.3f alpha, orbit angle %.4f, |H| %.1e -> %.1e, "
                    "growth exponent %.3f",
                    ok, seq.size(), radius / alpha, angle, h_prev, h_last, growth.exponent)};
}

Outcome hygiene() {
  const MassSystem sys({1.0, 2.0, 0.5}, 2);
  std::mt19937_64 rng(10);
  DiscretePath p;
  p.times = action::make_grid(0.0, 2.0, {24, GridSpec::Grading::Start, 3.0, 0.1});
  for (std::size_t k = 0; k < p.times.size(); ++k) p.nodes.push_back(cs::random_configuration(sys, rng));
  const auto grad = action::action_gradient(sys, p);
  const double step = 1e-6;
  double worst_grad = 0.0;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    for (std::size_t i = 0; i < p.nodes[k].size(); ++i) {
      DiscretePath pp = p, pm = p;
      pp.nodes[k][i] += step;
      pm.nodes[k][i] -= step;
      const double fd = (action::discrete_action(sys, pp) - action::discrete_action(sys, pm)) / (2.0 * step);
      worst_grad = std::max(worst_grad, std::abs(fd - grad[k][i]));
    }
  }
  // Drift at 2M against the Richardson estimate of its grid error from M.
  const MassSystem eq({1.0, 1.0, 1.0}, 2);
  double worst_ratio = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Configuration x = random_in_shell(eq, rng, 1.0);
    const Configuration y = random_in_shell(eq, rng, 1.5);
    MinimizeOptions opt;
    opt.grid.segments = 400;
    const double coarse = action::energy_drift(eq, action::minimize_fixed_endpoints(eq, x, y, 1.0, opt).path);
    opt.grid.segments = 800;
    const double fine = action::energy_drift(eq, action::minimize_fixed_endpoints(eq, x, y, 1.0, opt).path);
    worst_ratio = std::max(worst_ratio, fine / (std::abs(coarse - fine) / 3.0));
  }
  return {worst_grad < 1e-6 && worst_ratio < 5.0,
          fmt("gradient max abs err %.1e, drift / grid-error bound %.2f", worst_grad, worst_ratio)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kepler oracle exactness", kepler_exactness},
      {"scaling laws", scaling_laws},
      {"kepler action vs integrated trajectories", ode_oracle},
      {"excess chain F >= F0 >= G >= 0", sundman_chain},
      {"lambert reduction vs discrete minimization", lambert_crosscheck},
      {"test path action bound", test_path_certificate},
      {"localization", localization},
      {"two-body ray parabolic motion", exact_parabolic},
      {"three-body generic parabolic motion", generic_parabolic},
      {"gradient and energy hygiene", hygiene},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    std::printf("%s %2zu %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
