#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mtlab {

/// Writes the project's CSV dialect: a leading `#` metadata line with the
/// tool version and invocation, optional extra `#` lines, then a header row
/// and numeric rows. Numbers use shortest round-trip formatting so output
/// is byte-reproducible.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::string_view invocation,
            std::vector<std::string> columns,
            std::span<const std::string> extra_comments = {});

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  std::size_t columns() const noexcept { return columns_.size(); }

 private:
  std::ostream& out_;
  std::vector<std::string> columns_;
};

/// The `#` metadata line shared by every output file (no trailing newline).
std::string metadata_line(std::string_view invocation);

}  // namespace mtlab
