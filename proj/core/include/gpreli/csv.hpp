#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace gpreli {

// Shortest round-trip decimal form of a double ("%.17g" trimmed): the same
// bits always print the same bytes, and parsing the text recovers the bits.
std::string format_double(double value);

// Writes header + rows, LF line endings, no trailing spaces. Throws io_error
// if the file cannot be opened. Parent directories must already exist.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Writes arbitrary text (JSON, SVG) with the same io_error policy.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace gpreli
