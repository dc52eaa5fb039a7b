#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace riskbn {

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

/// RFC-4180-ish CSV field quoting: quotes only when the field contains a
/// comma, quote or newline.
std::string csv_field(std::string_view field);

/// Splits one CSV line into fields, honoring quotes. `pos` advances past the
/// record (including the trailing newline).
std::vector<std::string> csv_parse_line(std::string_view text, std::size_t& pos);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string trim(std::string_view s);

std::vector<std::string> split_trimmed(std::string_view s, char sep);

}  // namespace riskbn
