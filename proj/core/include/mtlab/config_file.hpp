#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtlab {

/// Flat `name = value` configuration text. Blank lines and `#` comments
/// (whole-line or trailing) are ignored; keys are case-sensitive and may
/// appear at most once. List values are comma separated.
class KeyValueFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  KeyValueFile() = default;

  static KeyValueFile parse(std::string_view text,
                            std::string source = "<string>");
  /// Throws ConfigError naming the path when the file cannot be read.
  static KeyValueFile load(const std::filesystem::path& path);

  const std::string& source() const noexcept { return source_; }
  bool contains(std::string_view key) const;
  bool empty() const noexcept { return entries_.empty(); }

  /// Rejects the first key not listed in `allowed`, reporting its line.
  void require_known(std::span<const std::string_view> allowed) const;

  double get_double(std::string_view key) const;
  double get_double_or(std::string_view key, double fallback) const;
  long long get_int(std::string_view key) const;
  long long get_int_or(std::string_view key, long long fallback) const;
  bool get_bool_or(std::string_view key, bool fallback) const;
  std::string get_string_or(std::string_view key, std::string fallback) const;
  std::vector<double> get_list(std::string_view key) const;
  std::vector<double> get_list_or(std::string_view key,
                                  std::vector<double> fallback) const;

  /// Keys in file order.
  const std::vector<std::string>& keys() const noexcept { return order_; }

 private:
  const Entry& entry(std::string_view key) const;
  [[noreturn]] void fail(const Entry& e, std::string_view key,
                         const std::string& what) const;

  std::string source_ = "<string>";
  std::map<std::string, Entry, std::less<>> entries_;
  std::vector<std::string> order_;
};

/// Parses a full-string double; returns false on trailing garbage.
bool parse_double(std::string_view text, double& out);

/// Comma-separated doubles. Throws DomainError naming `what` on failure.
std::vector<double> parse_double_list(std::string_view text,
                                      std::string_view what);

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);
std::string format_double_list(std::span<const double> values);

}  // namespace mtlab
