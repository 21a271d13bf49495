#include "mtlab/report.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "mtlab/config_file.hpp"
#include "mtlab/csv.hpp"
#include "mtlab/error.hpp"

namespace mtlab {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Input: return "input";
    case Source::Reported: return "reported";
    case Source::Derived: return "derived";
    case Source::Modeling: return "modeling";
  }
  return "unknown";
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::Text;
  if (s == "csv") return ReportFormat::Csv;
  throw UsageError(fmt::format("--format: expected 'text' or 'csv', got '{}'", s));
}

std::string_view to_string(ReportFormat f) {
  return f == ReportFormat::Csv ? "csv" : "text";
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_report(std::ostream& out, const std::vector<ReportEntry>& entries,
                  ReportFormat format, std::string_view invocation) {
  out << metadata_line(invocation) << '\n';
  if (format == ReportFormat::Csv) {
    out << "key,value,unit,source,note\n";
    for (const auto& e : entries) {
      out << csv_field(e.key) << ',' << format_double(e.value) << ','
          << csv_field(e.unit) << ',' << to_string(e.source) << ','
          << csv_field(e.note) << '\n';
    }
    return;
  }
  std::size_t width = 0;
  for (const auto& e : entries) width = std::max(width, e.key.size());
  for (const auto& e : entries) {
    std::string line = fmt::format("{:<{}} = {}", e.key, width,
                                   format_double(e.value));
    if (!e.unit.empty()) line += " " + e.unit;
    line += fmt::format("  [{}]", to_string(e.source));
    if (!e.note.empty()) line += "  " + e.note;
    out << line << '\n';
  }
}

}  // namespace mtlab
