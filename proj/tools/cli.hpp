#pragma once

// Command-line front end. parse_config() merges an optional INI file with
// flags (flags win) and validates; run() executes one subcommand and writes
// its outputs into the output directory.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace parabolica::cli {

enum ExitCode : int {
  kSuccess = 0,
  kSolverFailure = 1,
  kViolations = 2,
  kUsage = 64,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::vector<double> masses{1.0, 1.0, 1.0};
  int dim = 2;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out_dir = ".";

  double tol = 1e-8;
  int nodes = 1000;  // segments of the time grid
  int restarts = 64;
  int max_iterations = 20000;

  // kepler
  double u0 = 1.0;
  std::string table = "S";
  double a = 0.0;
  std::string b_grid = "0.1:5:50";
  double s = 1.0;

  // minimize
  double T = 1.0;
  std::vector<std::string> inits{"straight", "power"};
  std::vector<double> x_start;
  std::vector<double> x_end;
  std::string potential = "newtonian";

  // testpath, excess
  int count = 50;

  // excess, verify
  std::vector<double> s_list;
  std::vector<double> eps_list{1e-3};
  int radial = 400;
  int angular = 400;
  int ball = 200;

  // parabolic
  double t1 = 1.0;
  int K = 8;
  std::string xi_mode = "random";
  double xi_scale = 0.2;
  std::vector<double> windows;
  double grid_power = 3.0;
  double grid_offset = 0.05;
  bool warm_start = true;

  /// One line per key set in both the config file and on the command line.
  std::vector<std::string> provenance;
};

/// args excludes the program name. Throws UsageError; `--help` throws
/// HelpRequested carrying the help text.
RunConfig parse_config(const std::vector<std::string>& args);

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical JSON of every resolved setting, and its SHA-256.
std::string manifest_json(const RunConfig& config);
std::string sha256_hex(const std::string& data);

int run(const RunConfig& config);

/// parse + run with the exit-code mapping; messages go to stderr.
int main_entry(int argc, char** argv);

}  // namespace parabolica::cli
