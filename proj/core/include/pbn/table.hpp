#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbn {

/// Accuracy summary of one method (or one phi perturbation) under one
/// condition, in percent.
struct ColumnStats {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> samples;  // per-trial accuracies, percent
  bool bold = false;            // best or statistically equivalent
};

struct SummaryRow {
  std::string condition;
  std::vector<ColumnStats> columns;
  std::optional<double> phi_mean;  // percent
  std::optional<double> phi_std;
};

enum class TableFormat { csv, markdown };

/// Renders rows with two-decimal percentages. CSV: one line per row with
/// <name>_mean, <name>_std and <name>_bold columns, conditions quoted when
/// they contain commas. Markdown: padded pipe table, bold cells as **x**.
/// All rows must share the first row's column names. Throws on empty input.
std::string emit_table(std::span<const SummaryRow> rows, TableFormat format);

struct ParsedColumn {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;
  bool bold = false;
};

struct ParsedRow {
  std::string condition;
  std::vector<ParsedColumn> columns;
  std::optional<double> phi_mean;
  std::optional<double> phi_std;
};

/// Reads back a CSV table produced by emit_table.
std::vector<ParsedRow> parse_csv_table(std::string_view text);

}  // namespace pbn
