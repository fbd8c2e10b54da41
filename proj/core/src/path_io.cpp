#include "parabolica/path_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "parabolica/errors.hpp"

namespace parabolica::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  while (first != s.data() + s.size() && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("path csv: bad number '" + s + "' on line " + std::to_string(line_no));
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_path_csv(std::ostream& out, const DiscretePath& path, const std::string& manifest_hash) {
  if (path.nodes.empty()) throw InputError("path csv: empty path");
  const int d = path.nodes[0].dim();
  out << "# manifest_sha256=" << manifest_hash << '\n';
  out << "t,body";
  for (int k = 1; k <= d; ++k) out << ",x" << k;
  out << '\n';
  for (std::size_t n = 0; n < path.size(); ++n) {
    const auto& q = path.nodes[n];
    for (int b = 0; b < q.n_bodies(); ++b) {
      out << format_double(path.times[n]) << ',' << b;
      for (int k = 0; k < d; ++k) out << ',' << format_double(q(b, k));
      out << '\n';
    }
  }
}

DiscretePath read_path_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  int dim = -1;
  std::vector<double> times;
  std::vector<std::vector<double>> coords;  // per node, body-major
  std::vector<int> bodies;                   // rows seen per node
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line);
    if (dim < 0) {
      if (f.size() < 3 || f[0] != "t" || f[1] != "body") throw InputError("path csv: missing header");
      dim = static_cast<int>(f.size()) - 2;
      continue;
    }
    if (static_cast<int>(f.size()) != dim + 2) {
      throw InputError("path csv: wrong field count on line " + std::to_string(line_no));
    }
    const double t = parse_double(f[0], line_no);
    const int body = static_cast<int>(parse_double(f[1], line_no));
    if (times.empty() || t != times.back()) {
      times.push_back(t);
      coords.emplace_back();
      bodies.push_back(0);
    }
    if (body != bodies.back()) {
      throw InputError("path csv: bodies out of order on line " + std::to_string(line_no));
    }
    ++bodies.back();
    for (int k = 0; k < dim; ++k) coords.back().push_back(parse_double(f[2 + k], line_no));
  }
  if (times.empty()) throw InputError("path csv: no data rows");
  DiscretePath path;
  const int n = bodies.front();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (bodies[i] != n) throw InputError("path csv: inconsistent body count");
    path.times.push_back(times[i]);
    path.nodes.emplace_back(n, dim, std::move(coords[i]));
  }
  return path;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows,
                           const std::string& manifest_hash) {
  out << "# manifest_sha256=" << manifest_hash << '\n';
  out << "t,r_over_t23,angle,angle_orbit,I_over_t43,speed,energy,Utilde,gradUtilde\n";
  for (const auto& r : rows) {
    out << format_double(r.t);
    for (double v : {r.r_over_t23, r.angle, r.angle_orbit, r.I_over_t43, r.speed, r.energy, r.Utilde,
                     r.gradUtilde}) {
      out << ',' << format_double(v);
    }
    out << '\n';
  }
}

}  // namespace parabolica::io
