#include "mtlab/csv.hpp"

#include "mtlab/config_file.hpp"
#include "mtlab/error.hpp"
#include "mtlab/version.hpp"

namespace mtlab {

std::string metadata_line(std::string_view invocation) {
  std::string line = "# mtlab ";
  line += kVersion;
  line += " | ";
  line += invocation;
  return line;
}

CsvWriter::CsvWriter(std::ostream& out, std::string_view invocation,
                     std::vector<std::string> columns,
                     std::span<const std::string> extra_comments)
    : out_(out), columns_(std::move(columns)) {
  out_ << metadata_line(invocation) << '\n';
  for (const auto& c : extra_comments) out_ << "# " << c << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns_[i];
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_.size()) {
    throw Error("csv row width does not match header");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << '\n';
}

}  // namespace mtlab
