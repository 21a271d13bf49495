#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mtlab {

/// Where a reported number comes from.
enum class Source {
  Input,     ///< copied from the user's configuration
  Reported,  ///< a published anchor value, reproduced verbatim
  Derived,   ///< computed by this library from other values
  Modeling,  ///< depends on a modeling choice made here
};

std::string_view to_string(Source s);

struct ReportEntry {
  std::string key;
  double value = 0.0;
  std::string unit;
  Source source = Source::Derived;
  std::string note;
};

enum class ReportFormat { Text, Csv };

ReportFormat parse_report_format(std::string_view s);
std::string_view to_string(ReportFormat f);

/// Fixed-order key/value report. Text form aligns `key = value unit`
/// columns; CSV form follows the CsvWriter conventions with string columns.
void write_report(std::ostream& out, const std::vector<ReportEntry>& entries,
                  ReportFormat format, std::string_view invocation);

}  // namespace mtlab
