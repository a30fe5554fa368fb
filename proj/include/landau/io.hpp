#pragma once

#include <string>

namespace landau {

/// Writes bytes to path.tmp and renames it over path, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);

/// Shortest round-trip decimal form ("%.17g"); the same double always gives the same text.
std::string format_double(double x);

}  // namespace landau
