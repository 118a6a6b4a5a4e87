// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ckgru {

class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Lines of a text file without trailing '\r'. Throws ResourceError when the
/// file cannot be opened.
std::vector<std::string> read_lines(const std::string &path);
std::string read_file(const std::string &path);
void write_file(const std::string &path, std::string_view contents);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string> &parts, std::string_view sep);
std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s, const std::string &context);
long long parse_int(std::string_view s, const std::string &context);

} // namespace ckgru
