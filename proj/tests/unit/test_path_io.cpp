#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "parabolica/errors.hpp"
#include "parabolica/path_io.hpp"

using namespace parabolica;
namespace cs = parabolica::configspace;

TEST(PathIo, BitExactRoundTrip) {
  const MassSystem sys({1.0, 2.0, 3.0}, 3);
  std::mt19937_64 rng(8);
  DiscretePath p;
  p.times = action::make_grid(0.0, 3.7, {25, GridSpec::Grading::Start, 3.0, 0.01});
  for (std::size_t k = 0; k < p.times.size(); ++k) p.nodes.push_back(cs::random_configuration(sys, rng) * 1e-3);
  std::stringstream ss;
  io::write_path_csv(ss, p, "abc");
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("# manifest_sha256=abc\nt,body,x1,x2,x3\n", 0), 0u);
  const DiscretePath q = io::read_path_csv(ss);
  ASSERT_EQ(q.size(), p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_EQ(q.times[k], p.times[k]);
    EXPECT_EQ(q.nodes[k], p.nodes[k]);
  }
}

TEST(PathIo, MalformedInput) {
  std::stringstream missing("0,0,1\n");
  EXPECT_THROW(io::read_path_csv(missing), InputError);
  std::stringstream bad("t,body,x1\n0,0,abc\n");
  EXPECT_THROW(io::read_path_csv(bad), InputError);
  std::stringstream ragged("t,body,x1\n0,0,1\n0,1,2\n1,0,3\n");
  EXPECT_THROW(io::read_path_csv(ragged), InputError);
}

TEST(PathIo, DiagnosticsHeader) {
  std::stringstream ss;
  DiagnosticRow r;
  r.t = 1.0;
  r.r_over_t23 = 1.0;
  io::write_diagnostics_csv(ss, {r}, "h");
  std::string line;
  std::getline(ss, line);
  std::getline(ss, line);
  EXPECT_EQ(line, "t,r_over_t23,angle,angle_orbit,I_over_t43,speed,energy,Utilde,gradUtilde");
  std::getline(ss, line);
  EXPECT_EQ(line, "1,1,0,0,0,0,0,0,0");
}
