#include "amcf/io.hpp"

#include "amcf/errors.hpp"

#include <charconv>
#include <cmath>

namespace amcf {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double value = 0.0;
  const char* begin = text.data();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto res = std::from_chars(begin, text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorKind::Parse, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

long parse_long(std::string_view text) {
  text = trim(text);
  long value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    fail(ErrorKind::Parse, "not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace amcf
