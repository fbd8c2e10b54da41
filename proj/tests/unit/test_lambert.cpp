#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "parabolica/errors.hpp"
#include "parabolica/kepler1d.hpp"
#include "parabolica/lambert.hpp"

using namespace parabolica;
namespace cs = parabolica::configspace;

namespace {

// Rotation by theta in the (0, 1) coordinate plane, applied to every body.
Configuration rotate(const Configuration& x, double theta) {
  Configuration y = x;
  const double c = std::cos(theta), s = std::sin(theta);
  for (int b = 0; b < x.n_bodies(); ++b) {
    y(b, 0) = c * x(b, 0) - s * x(b, 1);
    y(b, 1) = s * x(b, 0) + c * x(b, 1);
  }
  return y;
}

struct Fixture {
  MassSystem sys{{1.0, 1.0, 1.0}, 2};
  CentralConfig cc = central::find_minimizing_central_configuration(sys);
};

}  // namespace

TEST(Lambert, CollinearReductionGeometry) {
  // Unit mass norm on each axis.
  const MassSystem pair({1.0, 1.0}, 2);
  const double h = 1.0 / std::sqrt(2.0);
  const Configuration x1(2, 2, {h, 0.0, -h, 0.0});
  const Configuration x2(2, 2, {0.0, h, 0.0, -h});
  const auto [d1, d2] = lambert::collinear_reduction(pair, x1, x2);
  EXPECT_NEAR(d1, (2.0 - std::sqrt(2.0)) / 2.0, 1e-14);
  EXPECT_NEAR(d2, (2.0 + std::sqrt(2.0)) / 2.0, 1e-14);
  const auto [e1, e2] = lambert::collinear_reduction(pair, x1, x1 * 3.0);
  EXPECT_NEAR(e1, 1.0, 1e-14);
  EXPECT_NEAR(e2, 3.0, 1e-14);
  const auto [f1, f2] = lambert::collinear_reduction(pair, x1, -x1 * 2.0);
  EXPECT_NEAR(f1, 0.0, 1e-14);
  EXPECT_NEAR(f2, 3.0, 1e-14);
  EXPECT_THROW(lambert::collinear_reduction(pair, x1, x1.zeros_like()), DomainError);
}

TEST(Lambert, SameRayIsTheRadialAction) {
  Fixture f;
  const double a = lambert::kepler_central_action_A0(f.sys, f.cc.x0 * 0.7, f.cc.x0 * 2.1, 1.3, f.cc.u0);
  EXPECT_NEAR(a, kepler::kepler_action_S(0.7, 2.1, 1.3, f.cc.u0), 1e-12 * a);
}

TEST(Lambert, DominatesTheRadialAction) {
  Fixture f;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Configuration x1 = cs::normalize(f.sys, cs::random_configuration(f.sys, rng)) * (0.2 + 2.0 * unit(rng));
    const Configuration x2 = cs::normalize(f.sys, cs::random_configuration(f.sys, rng)) * (0.2 + 2.0 * unit(rng));
    const double s = 0.1 + 5.0 * unit(rng);
    EXPECT_GE(lambert::kepler_central_action_A0(f.sys, x1, x2, s, f.cc.u0),
              kepler::action_between(cs::norm(f.sys, x1), cs::norm(f.sys, x2), s, f.cc.u0) - 1e-12);
  }
}

TEST(Lambert, InvariantUnderRotations) {
  Fixture f;
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> unit(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 20; ++i) {
    const Configuration x1 = cs::random_configuration(f.sys, rng);
    const Configuration x2 = cs::random_configuration(f.sys, rng);
    const double theta = unit(rng);
    const double a = lambert::kepler_central_action_A0(f.sys, x1, x2, 0.8, f.cc.u0);
    const double b = lambert::kepler_central_action_A0(f.sys, rotate(x1, theta), rotate(x2, theta), 0.8, f.cc.u0);
    EXPECT_NEAR(a, b, 1e-10 * a);
  }
}

TEST(Lambert, MatchesTheDiscretizedComparisonProblem) {
  Fixture f;
  std::mt19937_64 rng(3);
  MinimizeOptions opt;
  opt.grid.segments = 2000;
  opt.potential = PotentialModel::central_kepler(f.cc.u0);
  for (int i = 0; i < 2; ++i) {
    const Configuration x1 = f.cc.x0 * 1.0;
    const Configuration x2 = rotate(f.cc.x0, 0.8 + 0.9 * i) * 1.7;
    const auto rep = action::minimize_fixed_endpoints(f.sys, x1, x2, 1.0, opt);
    const double a0 = lambert::kepler_central_action_A0(f.sys, x1, x2, 1.0, f.cc.u0);
    EXPECT_NEAR(rep.action, a0, 1e-3 * a0);
    EXPECT_LE(lambert::polar_angle_variation(f.sys, rep.path), std::numbers::pi + 0.05);
  }
}

TEST(Lambert, F0VanishesOnTheRayAndIsPositiveOffIt) {
  Fixture f;
  const Configuration ray = f.cc.x0 * f.cc.constants.alpha;
  for (double s : {10.0, 100.0}) EXPECT_NEAR(lambert::excess_F0(f.sys, f.cc, ray, s), 0.0, 1e-7);
  EXPECT_GT(lambert::excess_F0(f.sys, f.cc, rotate(ray, std::numbers::pi / 2.0), 100.0), 0.0);
  EXPECT_THROW(lambert::excess_F0(f.sys, f.cc, ray, 1.0), DomainError);
}

TEST(Lambert, F0DominatesScriptG) {
  Fixture f;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Configuration x = cs::normalize(f.sys, cs::random_configuration(f.sys, rng)) *
                            (f.cc.constants.alpha * (0.1 + 2.9 * unit(rng)));
    const double s = 1.5 + 500.0 * unit(rng);
    EXPECT_GE(lambert::excess_F0(f.sys, f.cc, x, s),
              kepler::script_G(cs::norm(f.sys, x), s, f.cc.u0) - 1e-10);
  }
}

TEST(Lambert, ExcessChainAtAnAngle) {
  Fixture f;
  std::mt19937_64 rng(2);
  const Configuration e = lambert::random_orthogonal_direction(f.sys, f.cc.x0, rng);
  const Configuration x = (f.cc.x0 * std::cos(0.5) + e * std::sin(0.5)) * f.cc.constants.alpha;
  const ExcessReport rep = lambert::excess_F(f.sys, f.cc, x, 50.0);
  EXPECT_TRUE(rep.chain_ok);
  EXPECT_GT(rep.F0_val, 0.0);
  EXPECT_TRUE(rep.converged);
}

TEST(Lambert, ExcessOnTheRay) {
  Fixture f;
  const double alpha = f.cc.constants.alpha;
  const ExcessReport at = lambert::excess_F(f.sys, f.cc, f.cc.x0 * alpha, 50.0);
  EXPECT_NEAR(at.F_val, 0.0, at.slack);
  const ExcessReport far = lambert::excess_F(f.sys, f.cc, f.cc.x0 * (2.0 * alpha), 50.0);
  EXPECT_NEAR(far.F_val, far.scriptG_val, far.slack);
  EXPECT_TRUE(far.chain_ok);
}

TEST(Lambert, LocalizationConstants) {
  Fixture f;
  const auto k = lambert::localization_constants(f.cc);
  const double alpha = f.cc.constants.alpha;
  EXPECT_NEAR(k.G2, 5.0 * std::sqrt(f.cc.u0) / (std::sqrt(2.0) * std::pow(alpha, 1.5)), 1e-4 * k.G2);
  EXPECT_GT(k.delta_bar, 0.0);
  EXPECT_GT(k.eps_bar, 0.0);
  EXPECT_GT(k.C2, 5.0 + 16.0 * std::sqrt(2.0) / (f.cc.constants.beta0 * std::sqrt(alpha)));
  for (double d = -k.delta_bar; d <= k.delta_bar; d += k.delta_bar / 50.0) {
    EXPECT_GE(kepler::G_of_r(alpha + d, f.cc.u0), k.C1 * d * d - 1e-14);
  }
}

TEST(Lambert, LocalizationHoldsOnTheDefaultSample) {
  Fixture f;
  const auto rep = lambert::verify_localization(f.sys, f.cc, {1e-3}, {1000.0});
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.samples, 1001);
  EXPECT_TRUE(rep.violations.empty());
  ASSERT_EQ(rep.cases.size(), 1u);
  EXPECT_FALSE(rep.cases[0].outside_hypotheses);
}

TEST(Lambert, LargeEpsIsOutsideTheHypotheses) {
  Fixture f;
  const auto rep = lambert::verify_localization(f.sys, f.cc, {1.0}, {1000.0}, {50, 50, 50, 0, 1});
  ASSERT_EQ(rep.cases.size(), 1u);
  EXPECT_TRUE(rep.cases[0].outside_hypotheses);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(Lambert, CenterPointAlwaysInside) {
  Fixture f;
  const auto k = lambert::localization_constants(f.cc);
  for (double eps : {1e-6, 1e-3, 0.1}) {
    const auto c = lambert::localization_radii(k, f.cc, eps);
    EXPECT_LE(kepler::script_G(f.cc.constants.alpha, 1000.0, f.cc.u0), eps);
    EXPECT_GT(c.delta1, 0.0);
  }
}

TEST(Lambert, SamplingIsDeterministic) {
  Fixture f;
  const LocalizationSampleSpec spec{40, 40, 40, 5, 2};
  const auto a = lambert::verify_localization(f.sys, f.cc, {1e-3}, {500.0}, spec);
  const auto b = lambert::verify_localization(f.sys, f.cc, {1e-3}, {500.0}, {40, 40, 40, 5, 1});
  EXPECT_EQ(a.cases[0].angular_margin, b.cases[0].angular_margin);
  EXPECT_EQ(a.cases[0].ball_margin, b.cases[0].ball_margin);
}
