#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "parabolica/errors.hpp"
#include "parabolica/test_path.hpp"

using namespace parabolica;
namespace cs = parabolica::configspace;

TEST(TestPath, EndpointsEqualToTheHub) {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = central::find_minimizing_central_configuration(sys);
  const double R = 1.5;
  const TestPath tp = build_test_path(sys, cc.x0 * R, cc.x0 * R, R, 1.0, cc.x0);
  EXPECT_EQ(tp.h_start, 1);
  EXPECT_EQ(tp.h_end, 1);
  EXPECT_TRUE(tp.within_bound);
  for (const auto& q : tp.path.nodes) EXPECT_LT(cs::norm(sys, q - cc.x0 * R), 1e-12);
}

TEST(TestPath, RandomPairsStayBelowTheBound) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n : {3, 4}) {
    const MassSystem sys(std::vector<double>(static_cast<std::size_t>(n), 1.0), 2);
    const CentralConfig cc = central::find_minimizing_central_configuration(sys);
    for (int i = 0; i < 10; ++i) {
      const double R = 2.0, T = 1.0;
      const Configuration x = cs::normalize(sys, cs::random_configuration(sys, rng)) * (R * unit(rng));
      const Configuration y = cs::normalize(sys, cs::random_configuration(sys, rng)) * (R * unit(rng));
      const TestPath tp = build_test_path(sys, x, y, R, T, cc.x0);
      EXPECT_TRUE(tp.within_bound) << tp.action << " > " << tp.bound;
      EXPECT_LE(tp.bound, tp.bound_generic);
      EXPECT_DOUBLE_EQ(tp.path.times.back(), T);
      EXPECT_EQ(tp.path.nodes.front(), x);
      EXPECT_EQ(tp.path.nodes.back(), y);
      for (std::size_t k = 1; k < tp.path.size(); ++k) EXPECT_GT(tp.path.times[k], tp.path.times[k - 1]);
    }
  }
}

TEST(TestPath, OptimalBoundScalesLikeSqrtR) {
  const double u = 3.0;
  const int h = 3;
  const double b1 = test_path_bound(1.0, 1.0, u, h);
  const double b4 = test_path_bound(4.0, 8.0, u, h);
  const double b16 = test_path_bound(16.0, 64.0, u, h);
  EXPECT_NEAR(b4 / b1, 2.0, 1e-12);
  EXPECT_NEAR(b16 / b4, 2.0, 1e-12);
}

TEST(TestPath, RejectsEndpointsOutsideTheBall) {
  const MassSystem sys({1.0, 1.0, 1.0}, 2);
  const CentralConfig cc = central::find_minimizing_central_configuration(sys);
  EXPECT_THROW(build_test_path(sys, cc.x0 * 2.0, cc.x0, 1.0, 1.0, cc.x0), DomainError);
  EXPECT_THROW(build_test_path(sys, cc.x0, cc.x0, 1.0, -1.0, cc.x0), DomainError);
}
