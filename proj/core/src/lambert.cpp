#include "parabolica/lambert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "parabolica/errors.hpp"
#include "parabolica/kepler1d.hpp"
#include "parabolica/parallel.hpp"

namespace parabolica::lambert {

namespace cs = configspace;

std::pair<double, double> collinear_reduction(const MassSystem& sys, const Configuration& x1,
                                              const Configuration& x2) {
  cs::check_shape(sys, x1);
  cs::check_shape(sys, x2);
  const double r1 = cs::norm(sys, x1);
  const double r2 = cs::norm(sys, x2);
  if (r1 == 0.0 || r2 == 0.0) throw DomainError("collinear reduction: zero configuration");
  const double c = cs::norm(sys, x1 - x2);
  // Triangle inequality up to rounding.
  const double d1 = std::max(0.0, 0.5 * (r1 + r2 - c));
  const double d2 = 0.5 * (r1 + r2 + c);
  return {d1, d2};
}

double kepler_central_action_A0(const MassSystem& sys, const Configuration& x1,
                                const Configuration& x2, double s, double u0) {
  if (!(s > 0.0)) throw DomainError("A0: s must be positive");
  const double r1 = cs::norm(sys, x1);
  const double r2 = cs::norm(sys, x2);
  if (r1 == 0.0 && r2 == 0.0) throw DomainError("A0: both endpoints at the origin");
  if (r1 == 0.0 || r2 == 0.0) return kepler::action_between(r1, r2, s, u0);
  const auto [d1, d2] = collinear_reduction(sys, x1, x2);
  return kepler::action_between(d1, d2, s, u0);
}

double excess_F0(const MassSystem& sys, const CentralConfig& cc, const Configuration& x, double s) {
  if (!(s > 1.0)) throw DomainError("F0: s must exceed 1");
  const double r = cs::norm(sys, x);
  if (r == 0.0) throw DomainError("F0: x must be nonzero");
  const double u0 = cc.u0;
  const Configuration end = central::homothetic_parabolic_gamma0(cc, s);
  return kepler::action_between(0.0, r, 1.0, u0) + kepler_central_action_A0(sys, x, end, s - 1.0, u0) -
         cc.constants.alpha0 * std::cbrt(s);
}

ExcessReport excess_F(const MassSystem& sys, const CentralConfig& cc, const Configuration& x,
                      double s, const ExcessOptions& options) {
  if (!(s > 1.0)) throw DomainError("F: s must exceed 1");
  cs::check_shape(sys, x);
  ExcessReport rep;
  rep.x = x;
  rep.s = s;
  const double r = cs::norm(sys, x);
  const Configuration zero = x.zeros_like();
  const Configuration end = central::homothetic_parabolic_gamma0(cc, s);

  MinimizeOptions first;
  first.tol = options.tol;
  first.max_iterations = options.max_iterations;
  first.grid = {options.segments, GridSpec::Grading::Start, 3.0, 0.0};
  first.inits = {MinimizeOptions::Init::PowerHomotopy};
  first.jobs = options.jobs;

  // x -> gamma0(s) over s - 1: start from x blended into gamma0(t + 1).
  MinimizeOptions second = first;
  second.grid = {options.segments, GridSpec::Grading::Start, 3.0, 1.0};
  DiscretePath blend;
  blend.times = action::make_grid(0.0, s - 1.0, second.grid);
  for (double t : blend.times) {
    const double w = t / (s - 1.0);
    blend.nodes.push_back(central::homothetic_parabolic_gamma0(cc, t + 1.0) + (x - cc.x0 * cc.constants.alpha) * (1.0 - w));
  }
  second.warm_start = blend;
  second.inits = {MinimizeOptions::Init::Provided, MinimizeOptions::Init::PowerHomotopy};

  const MinimizeReport a1 = action::minimize_fixed_endpoints(sys, zero, x, 1.0, first);
  const MinimizeReport a2 = action::minimize_fixed_endpoints(sys, x, end, s - 1.0, second);
  rep.action_first = a1.action;
  rep.action_second = a2.action;
  rep.iterations = a1.iterations + a2.iterations;
  rep.converged = a1.converged && a2.converged;
  rep.F_val = a1.action + a2.action - cc.constants.alpha0 * std::cbrt(s);
  rep.F0_val = r > 0.0 ? excess_F0(sys, cc, x, s) : kepler::script_G(0.0, s, cc.u0);
  rep.scriptG_val = kepler::script_G(r, s, cc.u0);
  rep.slack = action::quadrature_error_estimate(sys, a1.path) +
              action::quadrature_error_estimate(sys, a2.path) + options.slack_floor;
  rep.chain_ok = rep.F_val >= rep.F0_val - rep.slack && rep.F0_val >= rep.scriptG_val - rep.slack &&
                 rep.scriptG_val >= -rep.slack;
  return rep;
}

LocalizationConstants localization_constants(const CentralConfig& cc) {
  const double alpha = cc.constants.alpha;
  const double u0 = cc.u0;
  LocalizationConstants k;
  k.G2 = kepler::G_second_fd(alpha, u0);
  k.C1 = 0.9 * k.G2 / 2.0;
  // Largest delta_bar on a 1e-3 alpha lattice with G >= C1 (r - alpha)^2 throughout.
  const int steps = 999;
  const double h = alpha / 1000.0;
  k.delta_bar = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double d = i * h;
    const double q = k.C1 * d * d;
    if (kepler::G_of_r(alpha - d, u0) < q || kepler::G_of_r(alpha + d, u0) < q) break;
    k.delta_bar = d;
  }
  k.eps_bar = std::min({k.C1 * k.delta_bar * k.delta_bar / 2.0, 1.0, k.C1 * alpha * alpha / 8.0});
  k.C2 = 5.0 + 16.0 * std::numbers::sqrt2 / (cc.constants.beta0 * std::sqrt(alpha)) + 1.0;
  return k;
}

LocalizationCase localization_radii(const LocalizationConstants& k, const CentralConfig& cc,
                                    double eps) {
  if (!(eps > 0.0)) throw DomainError("localization: eps must be positive");
  const double alpha = cc.constants.alpha;
  LocalizationCase c;
  c.eps = eps;
  c.delta1 = std::sqrt(2.0 * eps / k.C1);
  c.delta2 = std::sqrt(k.C2 * eps);
  c.delta = std::sqrt(2.0 * alpha * (alpha + c.delta1) * (1.0 - std::cos(c.delta2)) +
                      c.delta1 * c.delta1);
  c.outside_hypotheses = eps > k.eps_bar;
  return c;
}

Configuration random_orthogonal_direction(const MassSystem& sys, const Configuration& x0,
                                          std::mt19937_64& rng) {
  const Configuration u0 = cs::normalize(sys, x0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Configuration e = cs::random_configuration(sys, rng);
    e -= u0 * cs::dot(sys, e, u0);
    const double n = cs::norm(sys, e);
    if (n > 1e-8) return e * (1.0 / n);
  }
  throw DomainError("no direction orthogonal to x0");
}

namespace {

struct Sample {
  double r = 0.0;
  double angle = 0.0;
  double value = 0.0;   // script-G or F0
  double limit = 0.0;
  bool violated = false;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

LocalizationReport verify_localization(const MassSystem& sys, const CentralConfig& cc,
                                       const std::vector<double>& eps_list,
                                       const std::vector<double>& s_list,
                                       const LocalizationSampleSpec& spec) {
  if (eps_list.empty() || s_list.empty()) throw InputError("verify: empty eps or s list");
  if (spec.radial < 1 || spec.angular < 0 || spec.ball < 0) throw InputError("verify: bad sample counts");
  for (double s : s_list) {
    if (!(s > 1.0)) throw DomainError("verify: s must exceed 1");
  }
  LocalizationReport rep;
  rep.constants = localization_constants(cc);
  const double alpha = cc.constants.alpha;
  const double u0 = cc.u0;
  const Configuration ray = cc.x0 * alpha;

  std::uint64_t case_index = 0;
  for (double eps : eps_list) {
    for (double s : s_list) {
      LocalizationCase lc = localization_radii(rep.constants, cc, eps);
      lc.s = s;
      const std::uint64_t seed = mix_seed(spec.seed, case_index++, 0);

      // Radial: {r in (0, 3 alpha] : G(r, s) <= eps} within alpha +- delta1.
      std::vector<Sample> radial(static_cast<std::size_t>(spec.radial) + 1);
      parallel_for(radial.size(), spec.jobs, [&](std::size_t i) {
        Sample& p = radial[i];
        p.r = i == 0 ? alpha : 3.0 * alpha * static_cast<double>(i) / spec.radial;
        p.value = kepler::script_G(p.r, s, u0);
        p.limit = eps;
        const bool inside = std::abs(p.r - alpha) <= lc.delta1;
        p.violated = p.value <= eps && !inside;
      });

      // Off-angle: |r - alpha| <= delta1, angle in (delta2, pi] must give F0 > eps.
      std::vector<Sample> angular(static_cast<std::size_t>(spec.angular));
      parallel_for(angular.size(), spec.jobs, [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(seed, 1, i));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Sample& p = angular[i];
        p.r = alpha + lc.delta1 * (2.0 * unit(rng) - 1.0);
        const double lo = std::min(lc.delta2, std::numbers::pi);
        p.angle = lo + (std::numbers::pi - lo) * (1.0 - unit(rng));
        const Configuration e = random_orthogonal_direction(sys, cc.x0, rng);
        const Configuration x = (cc.x0 * std::cos(p.angle) + e * std::sin(p.angle)) * p.r;
        p.value = excess_F0(sys, cc, x, s);
        p.limit = eps;
        p.violated = !(p.value > eps);
      });

      // Ball: the F0 sublevel set near the ray lies within delta of alpha x0.
      std::vector<Sample> ball(static_cast<std::size_t>(spec.ball));
      parallel_for(ball.size(), spec.jobs, [&](std::size_t i) {
        std::mt19937_64 rng(mix_seed(seed, 2, i));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Sample& p = ball[i];
        Configuration dir = cs::random_configuration(sys, rng);
        dir *= 1.0 / cs::norm(sys, dir);
        const Configuration x = ray + dir * (3.0 * lc.delta * std::cbrt(unit(rng)));
        p.r = cs::norm(sys, x);
        p.angle = cs::angle_between(sys, x, cc.x0);
        p.value = p.r > 0.0 ? excess_F0(sys, cc, x, s) : std::numeric_limits<double>::infinity();
        p.limit = lc.delta;
        p.violated = p.value <= eps && cs::norm(sys, x - ray) > lc.delta;
      });

      lc.samples = static_cast<int>(radial.size() + angular.size() + ball.size());
      lc.radial_margin = lc.angular_margin = lc.ball_margin = std::numeric_limits<double>::infinity();
      auto collect = [&](const std::vector<Sample>& v, const char* check, double& margin,
                         auto&& score) {
        for (const auto& p : v) {
          const double m = score(p);
          if (std::isfinite(m)) margin = std::min(margin, m);
          if (!p.violated) continue;
          ++lc.violations;
          if (!lc.outside_hypotheses) rep.violations.push_back({check, eps, s, p.r, p.angle, p.value, p.limit});
        }
      };
      // Radial margin: G - eps for samples outside the interval.
      collect(radial, "radial", lc.radial_margin, [&](const Sample& p) {
        return std::abs(p.r - alpha) > lc.delta1 ? p.value - eps : std::numeric_limits<double>::infinity();
      });
      collect(angular, "angular", lc.angular_margin, [&](const Sample& p) { return p.value - eps; });
      collect(ball, "ball", lc.ball_margin, [&](const Sample& p) {
        return std::sqrt(p.r * p.r + alpha * alpha - 2.0 * p.r * alpha * std::cos(p.angle)) > lc.delta
                   ? p.value - eps
                   : std::numeric_limits<double>::infinity();
      });
      rep.samples += lc.samples;
      if (!lc.outside_hypotheses && lc.violations > 0) rep.passed = false;
      rep.cases.push_back(lc);
    }
  }
  return rep;
}

double polar_angle_variation(const MassSystem& sys, const DiscretePath& path) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    total += cs::angle_between(sys, path.nodes[k], path.nodes[k + 1]);
  }
  return total;
}

}  // namespace parabolica::lambert
