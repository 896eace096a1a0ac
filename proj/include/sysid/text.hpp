#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sysid {

// "%.17g": enough digits for any double to round-trip exactly.
std::string format_double(double v);

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

// Strict parse of a full field; returns false on trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_int(std::string_view s, long long& out);

}  // namespace sysid
