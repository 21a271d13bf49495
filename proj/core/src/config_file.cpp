#include "mtlab/config_file.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mtlab/error.hpp"

namespace mtlab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
}

}  // namespace

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<double> parse_double_list(std::string_view text,
                                      std::string_view what) {
  std::vector<double> values;
  text = trim(text);
  if (text.empty()) return values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    double v = 0.0;
    if (!parse_double(piece, v)) {
      throw DomainError(fmt::format("{}: '{}' is not a number", what,
                                    trim(piece)));
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return values;
}

std::string format_double(double value) {
  // fmt's default float formatting is the shortest round-tripping form.
  return fmt::format("{}", value);
}

std::string format_double_list(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

KeyValueFile KeyValueFile::parse(std::string_view text, std::string source) {
  KeyValueFile file;
  file.source_ = std::move(source);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const auto line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(file.source_, line_no,
                        fmt::format("expected 'name = value', got '{}'", line));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || !std::all_of(key.begin(), key.end(), is_key_char)) {
      throw ConfigError(file.source_, line_no,
                        fmt::format("invalid key '{}'", key));
    }
    if (value.empty()) {
      throw ConfigError(file.source_, line_no,
                        fmt::format("key '{}' has no value", key));
    }
    if (auto it = file.entries_.find(key); it != file.entries_.end()) {
      throw ConfigError(file.source_, line_no,
                        fmt::format("duplicate key '{}' (first set on line {})",
                                    key, it->second.line));
    }
    file.entries_.emplace(std::string(key), Entry{std::string(value), line_no});
    file.order_.emplace_back(key);
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path.string(), 0, "cannot open configuration file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

bool KeyValueFile::contains(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

void KeyValueFile::require_known(
    std::span<const std::string_view> allowed) const {
  for (const auto& key : order_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(source_, entries_.find(key)->second.line,
                        fmt::format("unknown key '{}'", key));
    }
  }
}

const KeyValueFile::Entry& KeyValueFile::entry(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError(source_, 0, fmt::format("missing required key '{}'", key));
  }
  return it->second;
}

void KeyValueFile::fail(const Entry& e, std::string_view key,
                        const std::string& what) const {
  throw ConfigError(source_, e.line,
                    fmt::format("key '{}': {} (got '{}')", key, what, e.value));
}

double KeyValueFile::get_double(std::string_view key) const {
  const auto& e = entry(key);
  double v = 0.0;
  if (!parse_double(e.value, v)) fail(e, key, "expected a finite number");
  return v;
}

double KeyValueFile::get_double_or(std::string_view key,
                                   double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}

long long KeyValueFile::get_int(std::string_view key) const {
  const auto& e = entry(key);
  long long v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    // Accept integral values written in floating notation, e.g. 1e4.
    double d = 0.0;
    if (parse_double(e.value, d) && std::floor(d) == d &&
        std::abs(d) < 9.0e15) {
      return static_cast<long long>(d);
    }
    fail(e, key, "expected an integer");
  }
  return v;
}

long long KeyValueFile::get_int_or(std::string_view key,
                                   long long fallback) const {
  return contains(key) ? get_int(key) : fallback;
}

bool KeyValueFile::get_bool_or(std::string_view key, bool fallback) const {
  if (!contains(key)) return fallback;
  const auto& e = entry(key);
  if (e.value == "1" || e.value == "true" || e.value == "on" ||
      e.value == "yes") {
    return true;
  }
  if (e.value == "0" || e.value == "false" || e.value == "off" ||
      e.value == "no") {
    return false;
  }
  fail(e, key, "expected a boolean");
}

std::string KeyValueFile::get_string_or(std::string_view key,
                                        std::string fallback) const {
  return contains(key) ? entry(key).value : std::move(fallback);
}

std::vector<double> KeyValueFile::get_list(std::string_view key) const {
  const auto& e = entry(key);
  try {
    return parse_double_list(e.value, key);
  } catch (const DomainError&) {
    fail(e, key, "expected a comma-separated list of numbers");
  }
}

std::vector<double> KeyValueFile::get_list_or(
    std::string_view key, std::vector<double> fallback) const {
  return contains(key) ? get_list(key) : std::move(fallback);
}

}  // namespace mtlab
