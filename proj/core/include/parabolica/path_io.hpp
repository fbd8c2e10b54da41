#pragma once

// CSV serialization. Numbers are written with 17 significant digits so a
// write/read cycle reproduces every double bit for bit. Lines starting with
// '#' are comments; writers emit one carrying the run manifest hash.

#include <iosfwd>
#include <string>
#include <vector>

#include "parabolica/action.hpp"
#include "parabolica/parabolic.hpp"

namespace parabolica::io {

std::string format_double(double v);

/// Header `t,body,x1..xd`, one row per (node, body).
void write_path_csv(std::ostream& out, const DiscretePath& path, const std::string& manifest_hash);
DiscretePath read_path_csv(std::istream& in);

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows,
                           const std::string& manifest_hash);

}  // namespace parabolica::io
