#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hpt {

// Shortest text that parses back to the same double.
std::string format_double(double v);

// Full-string parse; throws ParseError naming `what` on failure.
double parse_double(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace hpt
