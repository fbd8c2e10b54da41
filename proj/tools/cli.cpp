#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "parabolica/action.hpp"
#include "parabolica/central.hpp"
#include "parabolica/errors.hpp"
#include "parabolica/kepler1d.hpp"
#include "parabolica/lambert.hpp"
#include "parabolica/parabolic.hpp"
#include "parabolica/parallel.hpp"
#include "parabolica/path_io.hpp"
#include "parabolica/test_path.hpp"

namespace parabolica::cli {

namespace fs = std::filesystem;
namespace cs = configspace;
using json = nlohmann::ordered_json;

namespace {

const char* const kSubcommands[] = {"central", "kepler", "minimize", "testpath",
                                    "excess",  "verify", "parabolic"};

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--masses", c.masses, "Body masses")->delimiter(',');
  sub->add_option("--dim", c.dim, "Spatial dimension");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--jobs", c.jobs, "Worker threads (0: PARABOLICA_JOBS or 1)");
  sub->add_option("--out", c.out_dir, "Output directory");
  sub->add_option("--tol", c.tol, "Gradient tolerance");
  sub->add_option("--restarts", c.restarts, "Central configuration restarts");
  sub->add_option("--max-iterations", c.max_iterations, "Iteration cap per minimization");
}

void add_nodes(CLI::App* sub, RunConfig& c) {
  sub->add_option("--nodes", c.nodes, "Time-grid segments");
}

std::string option_key(const std::string& name) {
  std::string k = name;
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

void validate(const RunConfig& c) {
  if (c.masses.empty()) throw UsageError("masses: at least one body required");
  for (double m : c.masses) {
    if (!(m > 0.0) || !std::isfinite(m)) throw UsageError("masses: every mass must be positive");
  }
  if (c.masses.size() < 2) throw UsageError("masses: at least two bodies required");
  if (c.dim < 1) throw UsageError("dim: must be >= 1");
  if (c.jobs < 0) throw UsageError("jobs: must be >= 0");
  if (!(c.tol > 0.0)) throw UsageError("tol: must be positive");
  if (c.nodes < 2) throw UsageError("nodes: must be >= 2");
  if (c.restarts < 1) throw UsageError("restarts: must be >= 1");
  if (c.max_iterations < 1) throw UsageError("max-iterations: must be >= 1");
  if (!(c.u0 > 0.0)) throw UsageError("u0: must be positive");
  if (!(c.s > 0.0)) throw UsageError("s: must be positive");
  if (!(c.T > 0.0)) throw UsageError("T: must be positive");
  if (c.count < 1) throw UsageError("count: must be >= 1");
  if (!(c.t1 > 0.0) || c.K < 2) throw UsageError("t1/K: need t1 > 0 and K >= 2");
  if (!(c.xi_scale > 0.0)) throw UsageError("xi-scale: must be positive");
  const std::size_t n = c.masses.size() * static_cast<std::size_t>(c.dim);
  if (!c.x_start.empty() && c.x_start.size() != n) throw UsageError("x-start: expected N*d coordinates");
  if (!c.x_end.empty() && c.x_end.size() != n) throw UsageError("x-end: expected N*d coordinates");
  for (const auto& i : c.inits) {
    if (i != "straight" && i != "power" && i != "testpath") {
      throw UsageError("inits: unknown initialization '" + i + "'");
    }
  }
  for (double e : c.eps_list) {
    if (!(e > 0.0)) throw UsageError("eps: must be positive");
  }
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app{"Parabolic motions of the N-body problem by action minimization", "parabolica"};
  app.set_config("--config", "", "INI file; one section per subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  auto* central = app.add_subcommand("central", "Minimizing central configuration");
  add_common(central, c);

  auto* kepler = app.add_subcommand("kepler", "Kepler oracle tables");
  add_common(kepler, c);
  kepler->add_option("--u0", c.u0, "Coupling constant");
  kepler->add_option("--table", c.table, "S, h or G")->check(CLI::IsMember({"S", "h", "G"}));
  kepler->add_option("--a", c.a, "Start radius");
  kepler->add_option("--b-grid", c.b_grid, "lo:hi:n end radii");
  kepler->add_option("--s", c.s, "Transfer time");

  auto* minimize = app.add_subcommand("minimize", "Fixed-endpoint action minimizer");
  add_common(minimize, c);
  add_nodes(minimize, c);
  minimize->add_option("--T", c.T, "Duration");
  minimize->add_option("--inits", c.inits, "straight,power,testpath")->delimiter(',');
  minimize->add_option("--x-start", c.x_start, "Start configuration, body-major")->delimiter(',');
  minimize->add_option("--x-end", c.x_end, "End configuration, body-major")->delimiter(',');
  minimize->add_option("--potential", c.potential, "newtonian or kepler0")
      ->check(CLI::IsMember({"newtonian", "kepler0"}));

  auto* testpath = app.add_subcommand("testpath", "Explicit test paths against their action bound");
  add_common(testpath, c);
  testpath->add_option("--count", c.count, "Random instances");

  auto* excess = app.add_subcommand("excess", "Excess functions F >= F0 >= script-G on samples");
  add_common(excess, c);
  add_nodes(excess, c);
  excess->add_option("--count", c.count, "Random samples");
  excess->add_option("--s", c.s_list, "Values of s")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "Sampled localization checks");
  add_common(verify, c);
  verify->add_option("--eps", c.eps_list, "Values of eps")->delimiter(',');
  verify->add_option("--s", c.s_list, "Values of s")->delimiter(',');
  verify->add_option("--radial", c.radial, "Radial samples");
  verify->add_option("--angular", c.angular, "Off-angle samples");
  verify->add_option("--ball", c.ball, "Ball samples");

  auto* parabolic = app.add_subcommand("parabolic", "Minimizing sequence and its parabolic limit");
  add_common(parabolic, c);
  add_nodes(parabolic, c);
  parabolic->add_option("--t1", c.t1, "t_n = t1 2^n");
  parabolic->add_option("--K", c.K, "Number of terms");
  parabolic->add_option("--xi-mode", c.xi_mode, "ray or random")->check(CLI::IsMember({"ray", "random"}));
  parabolic->add_option("--xi-scale", c.xi_scale, "|x_i| / alpha");
  parabolic->add_option("--windows", c.windows, "Limit windows")->delimiter(',');
  parabolic->add_option("--grid-power", c.grid_power, "Grid grading power");
  parabolic->add_option("--grid-offset", c.grid_offset, "Grid grading offset");
  parabolic->add_option("--warm-start", c.warm_start, "Warm start along the sequence");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const char* name : kSubcommands) {
    if (app.got_subcommand(name)) c.subcommand = name;
  }

  const CLI::Option* config_opt = app.get_config_ptr();
  if (config_opt != nullptr && config_opt->count() > 0) {
    const auto config_path = config_opt->as<std::string>();
    for (const auto& item : CLI::ConfigINI().from_file(config_path)) {
      if (!item.parents.empty() && item.parents.front() != c.subcommand) continue;
      const std::string flag = "--" + option_key(item.name);
      const bool on_cli = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
      });
      if (on_cli) c.provenance.push_back(option_key(item.name) + ": flag overrides " + config_path);
    }
  }

  if (c.jobs == 0) {
    c.jobs = 1;
    if (const char* env = std::getenv("PARABOLICA_JOBS")) {
      try {
        c.jobs = std::max(1, std::stoi(env));
      } catch (const std::exception&) {
        throw UsageError("PARABOLICA_JOBS: not an integer");
      }
    }
  }
  validate(c);
  return c;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

std::string manifest_json(const RunConfig& c) {
  json j;
  j["tool"] = "parabolica";
  j["version"] = "0.1.0";
  j["subcommand"] = c.subcommand;
  j["masses"] = c.masses;
  j["dim"] = c.dim;
  j["seed"] = c.seed;
  j["tol"] = c.tol;
  j["nodes"] = c.nodes;
  j["restarts"] = c.restarts;
  j["max_iterations"] = c.max_iterations;
  if (c.subcommand == "kepler") {
    j["u0"] = c.u0;
    j["table"] = c.table;
    j["a"] = c.a;
    j["b_grid"] = c.b_grid;
    j["s"] = c.s;
  } else if (c.subcommand == "minimize") {
    j["T"] = c.T;
    j["inits"] = c.inits;
    j["x_start"] = c.x_start;
    j["x_end"] = c.x_end;
    j["potential"] = c.potential;
  } else if (c.subcommand == "testpath") {
    j["count"] = c.count;
  } else if (c.subcommand == "excess") {
    j["count"] = c.count;
    j["s"] = c.s_list;
  } else if (c.subcommand == "verify") {
    j["eps"] = c.eps_list;
    j["s"] = c.s_list;
    j["radial"] = c.radial;
    j["angular"] = c.angular;
    j["ball"] = c.ball;
  } else if (c.subcommand == "parabolic") {
    j["t1"] = c.t1;
    j["K"] = c.K;
    j["xi_mode"] = c.xi_mode;
    j["xi_scale"] = c.xi_scale;
    j["windows"] = c.windows;
    j["grid_power"] = c.grid_power;
    j["grid_offset"] = c.grid_offset;
    j["warm_start"] = c.warm_start;
  }
  return j.dump();
}

namespace {

// Single writer for everything a run produces.
class Output {
 public:
  Output(const RunConfig& c) : dir_(c.out_dir) {
    fs::create_directories(dir_);
    const std::string manifest = manifest_json(c);
    hash_ = sha256_hex(manifest);
    json j = json::parse(manifest);
    j["sha256"] = hash_;
    write_text("manifest.json", j.dump(2) + "\n");
  }
  const std::string& hash() const { return hash_; }

  void write_json(const std::string& name, json j) {
    j["manifest_sha256"] = hash_;
    write_text(name, j.dump(2) + "\n");
  }
  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name);
    if (!f) throw InputError("cannot write " + (dir_ / name).string());
    return f;
  }
  void write_path(const std::string& name, const DiscretePath& path) {
    auto f = open(name);
    io::write_path_csv(f, path, hash_);
  }

 private:
  void write_text(const std::string& name, const std::string& text) {
    auto f = open(name);
    f << text;
  }
  fs::path dir_;
  std::string hash_;
};

json to_json(const Configuration& x) {
  json rows = json::array();
  for (int b = 0; b < x.n_bodies(); ++b) {
    json row = json::array();
    for (int k = 0; k < x.dim(); ++k) row.push_back(x(b, k));
    rows.push_back(row);
  }
  return rows;
}

Configuration from_flat(const MassSystem& sys, const std::vector<double>& v) {
  return Configuration(sys.n_bodies(), sys.dim(), v);
}

CentralConfig find_central(const MassSystem& sys, const RunConfig& c) {
  CentralSearchOptions o;
  o.restarts = c.restarts;
  o.seed = c.seed;
  o.jobs = c.jobs;
  const CentralConfig found = central::find_minimizing_central_configuration(sys, o);
  return central::make_central_config(sys, central::canonical_orientation(sys, found.x0));
}

json central_json(const CentralConfig& cc) {
  json j;
  j["u0"] = cc.u0;
  j["residual"] = cc.residual;
  j["alpha"] = cc.constants.alpha;
  j["alpha0"] = cc.constants.alpha0;
  j["beta0"] = cc.constants.beta0;
  j["beta"] = cc.constants.beta;
  j["x0"] = to_json(cc.x0);
  return j;
}

Configuration random_unit(const MassSystem& sys, std::mt19937_64& rng) {
  Configuration x = cs::random_configuration(sys, rng);
  return x * (1.0 / cs::norm(sys, x));
}

MinimizeOptions::Init parse_init(const std::string& s) {
  if (s == "straight") return MinimizeOptions::Init::StraightHomotopy;
  if (s == "power") return MinimizeOptions::Init::PowerHomotopy;
  return MinimizeOptions::Init::TestPath;
}

std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(spec);
  if (!(in >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(hi >= lo)) {
    throw UsageError("b-grid: expected lo:hi:n");
  }
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return v;
}

int run_central(const RunConfig& c, Output& out) {
  const MassSystem sys(c.masses, c.dim);
  const CentralConfig cc = find_central(sys, c);
  out.write_json("central.json", central_json(cc));
  std::cout << "u0 = " << io::format_double(cc.u0) << "  alpha = " << io::format_double(cc.constants.alpha)
            << "  residual = " << cc.residual << "\n";
  return kSuccess;
}

int run_kepler(const RunConfig& c, Output& out) {
  const double alpha = central::parabolic_constants(c.u0).alpha;
  std::vector<double> b = parse_grid(c.b_grid);
  b.insert(std::upper_bound(b.begin(), b.end(), alpha), alpha);
  auto f = out.open("kepler_" + c.table + ".csv");
  f << "# manifest_sha256=" << out.hash() << "\n";
  using io::format_double;
  if (c.table == "G") {
    f << "r,G,G_prime\n";
    for (double r : b) {
      if (!(r > 0.0)) continue;
      f << format_double(r) << ',' << format_double(kepler::G_of_r(r, c.u0)) << ','
        << format_double(kepler::G_prime(r, c.u0)) << '\n';
    }
  } else {
    f << "a,b,s,S,h,monotone,G\n";
    for (double r : b) {
      if (r == 0.0 && c.a == 0.0) continue;
      const double lo = std::min(c.a, r), hi = std::max(c.a, r);
      const kepler::KeplerArc arc = kepler::solve_energy_h(lo, hi, c.s, c.u0);
      f << format_double(c.a) << ',' << format_double(r) << ',' << format_double(c.s) << ','
        << format_double(arc.action) << ',' << format_double(arc.h) << ',' << (arc.monotone ? 1 : 0)
        << ',' << format_double(r > 0.0 ? kepler::G_of_r(r, c.u0) : 0.0) << '\n';
    }
  }
  std::cout << "wrote kepler_" << c.table << ".csv (" << b.size() << " rows, alpha = "
            << io::format_double(alpha) << ")\n";
  return kSuccess;
}

int run_minimize(const RunConfig& c, Output& out) {
  const MassSystem sys(c.masses, c.dim);
  const CentralConfig cc = find_central(sys, c);
  std::mt19937_64 rng(c.seed);
  const Configuration xs = c.x_start.empty() ? random_unit(sys, rng) : from_flat(sys, c.x_start);
  const Configuration xe = c.x_end.empty() ? random_unit(sys, rng) * 1.5 : from_flat(sys, c.x_end);
  MinimizeOptions o;
  o.grid.segments = c.nodes;
  o.tol = c.tol;
  o.max_iterations = c.max_iterations;
  o.jobs = c.jobs;
  o.inits.clear();
  for (const auto& i : c.inits) o.inits.push_back(parse_init(i));
  o.test_path_direction = cc.x0;
  if (c.potential == "kepler0") o.potential = PotentialModel::central_kepler(cc.u0);

  const MinimizeReport rep = action::minimize_fixed_endpoints(sys, xs, xe, c.T, o);
  out.write_path("path.csv", rep.path);
  json j;
  j["action"] = rep.action;
  j["grad_norm"] = rep.grad_norm;
  j["iterations"] = rep.iterations;
  j["converged"] = rep.converged;
  j["init"] = rep.init;
  j["message"] = rep.message;
  j["min_separation"] = rep.min_separation;
  j["quadrature_error"] = action::quadrature_error_estimate(sys, rep.path, o.potential);
  j["energy_drift"] = action::energy_drift(sys, rep.path, o.potential);
  if (c.potential == "newtonian") {
    const auto sc = action::sundman_lower_bound_check(sys, cc, rep);
    j["sundman"] = {{"holds", sc.holds}, {"margin", sc.margin}, {"slack", sc.slack},
                    {"kepler_action", sc.kepler_action}};
  } else {
    j["lambert_A0"] = lambert::kepler_central_action_A0(sys, xs, xe, c.T, cc.u0);
    j["polar_angle_variation"] = lambert::polar_angle_variation(sys, rep.path);
  }
  out.write_json("report.json", j);
  std::cout << "action = " << io::format_double(rep.action) << "  iterations = " << rep.iterations
            << "  converged = " << rep.converged << "\n";
  return rep.converged ? kSuccess : kSolverFailure;
}

int run_testpath(const RunConfig& c, Output& out) {
  const MassSystem sys(c.masses, c.dim);
  const CentralConfig cc = find_central(sys, c);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  json rows = json::array();
  int violations = 0;
  for (int i = 0; i < c.count; ++i) {
    const double R = 0.5 + 1.5 * unit(rng);
    const double T = 0.5 + 4.5 * unit(rng);
    const Configuration x = random_unit(sys, rng) * (R * unit(rng));
    const Configuration xp = random_unit(sys, rng) * (R * unit(rng));
    const TestPath tp = build_test_path(sys, x, xp, R, T, cc.x0);
    if (!tp.within_bound) ++violations;
    if (i == 0) out.write_path("testpath_0.csv", tp.path);
    rows.push_back({{"R", R}, {"T", T}, {"action", tp.action}, {"bound", tp.bound},
                    {"bound_generic", tp.bound_generic}, {"h_start", tp.h_start},
                    {"h_end", tp.h_end}, {"within_bound", tp.within_bound}});
  }
  out.write_json("testpath.json", {{"instances", rows}, {"violations", violations}});
  std::cout << c.count << " test paths, " << violations << " bound violations\n";
  return violations == 0 ? kSuccess : kViolations;
}

int run_excess(const RunConfig& c, Output& out) {
  const MassSystem sys(c.masses, c.dim);
  const CentralConfig cc = find_central(sys, c);
  const std::vector<double> s_list = c.s_list.empty() ? std::vector<double>{10.0, 100.0} : c.s_list;
  for (double s : s_list) {
    if (!(s > 1.0)) throw UsageError("s: every value must exceed 1");
  }
  const double alpha = cc.constants.alpha;
  std::vector<ExcessReport> reports(static_cast<std::size_t>(c.count));
  std::vector<Configuration> points;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < c.count; ++i) {
    const double r = alpha * (0.5 + 1.5 * unit(rng));
    const double th = 0.5 * std::numbers::pi * unit(rng);
    const Configuration e = lambert::random_orthogonal_direction(sys, cc.x0, rng);
    points.push_back((cc.x0 * std::cos(th) + e * std::sin(th)) * r);
  }
  ExcessOptions o;
  o.segments = c.nodes;
  o.tol = c.tol;
  o.max_iterations = c.max_iterations;
  parallel_for(points.size(), c.jobs, [&](std::size_t i) {
    reports[i] = lambert::excess_F(sys, cc, points[i], s_list[i % s_list.size()], o);
  });
  json rows = json::array();
  int broken = 0;
  for (const auto& r : reports) {
    if (!r.chain_ok) ++broken;
    rows.push_back({{"s", r.s}, {"r", cs::norm(sys, r.x)}, {"angle", cs::angle_between(sys, r.x, cc.x0)},
                    {"F", r.F_val}, {"F0", r.F0_val}, {"scriptG", r.scriptG_val}, {"slack", r.slack},
                    {"chain_ok", r.chain_ok}, {"converged", r.converged}});
  }
  out.write_json("excess.json", {{"central", central_json(cc)}, {"samples", rows}, {"chain_failures", broken}});
  std::cout << c.count << " samples, " << broken << " chain failures\n";
  return broken == 0 ? kSuccess : kViolations;
}

int run_verify(const RunConfig& c, Output& out) {
  const MassSystem sys(c.masses, c.dim);
  const CentralConfig cc = find_central(sys, c);
  const std::vector<double> s_list = c.s_list.empty() ? std::vector<double>{1000.0} : c.s_list;
  LocalizationSampleSpec spec;
  spec.radial = c.radial;
  spec.angular = c.angular;
  spec.ball = c.ball;
  spec.seed = c.seed;
  spec.jobs = c.jobs;
  const LocalizationReport rep = lambert::verify_localization(sys, cc, c.eps_list, s_list, spec);
  json cases = json::array();
  for (const auto& k : rep.cases) {
    cases.push_back({{"eps", k.eps}, {"s", k.s}, {"delta1", k.delta1}, {"delta2", k.delta2},
                     {"delta", k.delta}, {"outside_hypotheses", k.outside_hypotheses},
                     {"samples", k.samples}, {"violations", k.violations},
                     {"radial_margin", k.radial_margin}, {"angular_margin", k.angular_margin},
                     {"ball_margin", k.ball_margin}});
  }
  json viol = json::array();
  for (const auto& v : rep.violations) {
    viol.push_back({{"check", v.check}, {"eps", v.eps}, {"s", v.s}, {"r", v.r}, {"angle", v.angle},
                    {"value", v.value}, {"limit", v.limit}});
  }
  const auto& k = rep.constants;
  out.write_json("verify.json",
                 {{"central", central_json(cc)},
                  {"constants", {{"G2", k.G2}, {"C1", k.C1}, {"delta_bar", k.delta_bar}, {"eps_bar", k.eps_bar}, {"C2", k.C2}}},
                  {"cases", cases},
                  {"violations", viol},
                  {"samples", rep.samples},
                  {"passed", rep.passed}});
  std::cout << rep.samples << " samples, " << rep.violations.size() << " violations\n";
  return rep.passed ? kSuccess : kViolations;
}

int run_parabolic(const RunConfig& c, Output& out) {
  const MassSystem sys(c.masses, c.dim);
  const CentralConfig cc = find_central(sys, c);
  const double alpha = cc.constants.alpha;
  Configuration x_i = cc.x0 * (alpha * c.xi_scale);
  if (c.xi_mode == "random") {
    std::mt19937_64 rng(c.seed);
    x_i = random_unit(sys, rng) * (alpha * c.xi_scale);
  }
  ParabolicOptions o;
  o.t1 = c.t1;
  o.K = c.K;
  o.segments = c.nodes;
  o.grid_power = c.grid_power;
  o.grid_offset = c.grid_offset;
  o.tol = c.tol;
  o.max_iterations = c.max_iterations;
  o.warm_start = c.warm_start;
  o.jobs = c.jobs;
  const auto entries = parabolic::minimizer_sequence(sys, cc, x_i, o);

  json seq = json::array();
  int ok = 0;
  for (std::size_t n = 0; n < entries.size(); ++n) {
    const auto& e = entries[n];
    seq.push_back({{"t", e.t}, {"ok", e.ok}, {"action", e.ok ? e.report.action : 0.0},
                   {"iterations", e.report.iterations}, {"converged", e.report.converged},
                   {"error", e.error}});
    if (!e.ok) continue;
    ++ok;
    out.write_path("gamma_" + std::to_string(n + 1) + ".csv", e.report.path);
  }
  if (ok < 2) {
    out.write_json("report.json", {{"sequence", seq}});
    std::cerr << "parabolic: fewer than two successful minimizations\n";
    return kSolverFailure;
  }
  std::vector<double> windows = c.windows;
  if (windows.empty()) {
    const double t_max = entries.back().t;
    for (double T = c.t1; T <= t_max / o.window_ratio; T *= 2.0) windows.push_back(T);
  }
  const LimitResult lim = parabolic::extract_limit_path(sys, entries, windows, o.window_ratio);
  out.write_path("limit.csv", lim.limit);
  const auto rows = parabolic::parabolic_diagnostics(sys, cc, lim.limit);
  {
    auto f = out.open("diagnostics.csv");
    io::write_diagnostics_csv(f, rows, out.hash());
  }
  json table = json::array();
  for (const auto& r : lim.table) {
    table.push_back({{"window", r.window}, {"t_prev", r.t_prev}, {"t_next", r.t_next}, {"sup_diff", r.sup_diff}});
  }
  json growth;
  if (windows.size() >= 2) {
    const GrowthFit g = parabolic::action_growth(sys, lim.limit, windows);
    growth = {{"exponent", g.exponent}, {"coefficient", g.coefficient}, {"windows", g.windows}, {"actions", g.actions}};
  }
  out.write_json("report.json", {{"central", central_json(cc)},
                                  {"x_i", to_json(x_i)},
                                  {"sequence", seq},
                                  {"convergence", table},
                                  {"converging", lim.converging},
                                  {"warning", lim.warning},
                                  {"growth", growth}});
  if (!lim.converging) std::cerr << "warning: " << lim.warning << "\n";
  if (!rows.empty()) {
    std::cout << "t = " << io::format_double(rows.back().t)
              << "  r/t^(2/3) = " << io::format_double(rows.back().r_over_t23)
              << "  alpha = " << io::format_double(alpha) << "\n";
  }
  return kSuccess;
}

}  // namespace

int run(const RunConfig& c) {
  for (const auto& line : c.provenance) std::cerr << "config: " << line << "\n";
  Output out(c);
  if (c.subcommand == "central") return run_central(c, out);
  if (c.subcommand == "kepler") return run_kepler(c, out);
  if (c.subcommand == "minimize") return run_minimize(c, out);
  if (c.subcommand == "testpath") return run_testpath(c, out);
  if (c.subcommand == "excess") return run_excess(c, out);
  if (c.subcommand == "verify") return run_verify(c, out);
  if (c.subcommand == "parabolic") return run_parabolic(c, out);
  throw UsageError("unknown subcommand '" + c.subcommand + "'");
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig config;
  try {
    config = parse_config(args);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return kSuccess;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  try {
    return run(config);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
}

}  // namespace parabolica::cli
