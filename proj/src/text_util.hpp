#pragma once

// Small text helpers shared by the file readers. Not installed.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace duet::detail {

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

// Strict full-string parse; returns false on trailing garbage or overflow.
bool parse_double(std::string_view s, double& out);

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

// One `key = value` per line; blank lines and lines starting with '#' are
// skipped. Throws ParseError naming `source` and the line number.
std::vector<KeyValue> read_key_values(std::istream& in, const std::string& source);

std::vector<double> parse_double_list(std::string_view s,
                                      const std::string& context);

bool parse_bool(std::string_view s, const std::string& context);

}  // namespace duet::detail
