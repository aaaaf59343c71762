#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace cxorder::cli {

/// One number per line; '#' starts a comment, blank lines are skipped.
/// Throws IngestError naming `source` and the 1-based line on bad input.
std::vector<double> read_values(std::istream& in, const std::string& source);

/// Reads from a path, or stdin for "-".
std::vector<double> read_values_file(const std::string& path);

/// Accepts a number or inf/infinity.
double parse_p_norm(const std::string& text);

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 iff the command completed, whatever the test decision.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cxorder::cli
