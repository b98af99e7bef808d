#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace goliath {

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Whole-string parse of a finite decimal; a leading '+' is accepted.
std::optional<double> parse_double(std::string_view text);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

} // namespace goliath
