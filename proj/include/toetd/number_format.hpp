#pragma once

#include <string>
#include <string_view>

namespace toetd {

// Shortest decimal string that parses back to the same double (std::to_chars
// round-trip form). Non-finite values print as "nan", "inf", "-inf".
std::string format_double(double value);

// Parses a decimal, "inf"/"nan", or a rational "p/q". Throws InvalidInput.
double parse_double(std::string_view text);

}  // namespace toetd
