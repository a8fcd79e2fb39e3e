#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctrain {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Strict full-string parse; rejects trailing garbage and empty input.
std::optional<double> parse_double(std::string_view text);

std::string_view trim(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace ctrain
