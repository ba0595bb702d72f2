#include "text_util.hpp"

#include <charconv>
#include <cmath>

#include "duet/error.hpp"

namespace duet::detail {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::vector<KeyValue> read_key_values(std::istream& in,
                                      const std::string& source) {
  std::vector<KeyValue> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  source + ":" + std::to_string(line_no) +
                      ": expected 'key = value'");
    }
    KeyValue kv{std::string(trim(t.substr(0, eq))),
                std::string(trim(t.substr(eq + 1))), line_no};
    if (kv.key.empty()) {
      throw Error(ErrorCode::kParseError,
                  source + ":" + std::to_string(line_no) + ": empty key");
    }
    out.push_back(std::move(kv));
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view s,
                                      const std::string& context) {
  std::vector<double> values;
  for (std::string_view part : split(s, ',')) {
    double v;
    if (!parse_double(part, v)) {
      throw Error(ErrorCode::kParseError,
                  context + ": not a number: '" + std::string(trim(part)) + "'");
    }
    values.push_back(v);
  }
  return values;
}

bool parse_bool(std::string_view s, const std::string& context) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorCode::kParseError,
              context + ": expected true or false, got '" + std::string(s) + "'");
}

}  // namespace duet::detail
