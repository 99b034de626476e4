#include "toetd/number_format.hpp"

#include <array>
#include <charconv>
#include <system_error>

#include "toetd/error.hpp"

namespace toetd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_plain(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InvalidInput("cannot parse number '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return {buffer.data(), ptr};
}

double parse_double(std::string_view text) {
  const std::string_view s = trim(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const double num = parse_plain(trim(s.substr(0, slash)), s);
    const double den = parse_plain(trim(s.substr(slash + 1)), s);
    if (den == 0.0) throw InvalidInput("zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  return parse_plain(s, s);
}

}  // namespace toetd
