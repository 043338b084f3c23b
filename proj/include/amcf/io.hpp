#pragma once

#include <string>
#include <string_view>

namespace amcf {

/// Locale-independent, round-trip formatting with 17 significant digits.
std::string format_double(double value);

/// Locale-independent parse of a full token; throws a Parse error otherwise.
double parse_double(std::string_view text);
long parse_long(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace amcf
