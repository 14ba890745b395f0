#pragma once

#include <string>
#include <vector>

namespace sturmian {

/// Full-precision decimal rendering (17 significant digits) so artifacts
/// diff byte-for-byte across runs.
std::string format_double(double v);

/// Writes rows as comma-separated lines with a header row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace sturmian
