#include "pbn/table.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace pbn {

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

void check_rows(std::span<const SummaryRow> rows) {
  if (rows.empty()) throw std::invalid_argument("emit_table: no rows");
  const auto& head = rows.front().columns;
  for (const auto& row : rows) {
    if (row.columns.size() != head.size()) throw std::invalid_argument("emit_table: ragged rows");
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (row.columns[i].name != head[i].name) {
        throw std::invalid_argument("emit_table: column names differ between rows");
      }
    }
  }
}

bool has_phi(std::span<const SummaryRow> rows) {
  return std::any_of(rows.begin(), rows.end(), [](const SummaryRow& r) { return r.phi_mean.has_value(); });
}

std::string emit_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  const bool phi = has_phi(rows);
  out << "condition";
  for (const auto& c : rows.front().columns) {
    out << ',' << csv_field(c.name + "_mean") << ',' << csv_field(c.name + "_std") << ','
        << csv_field(c.name + "_bold");
  }
  if (phi) out << ",phi_mean,phi_std";
  out << '\n';
  for (const auto& row : rows) {
    out << csv_field(row.condition);
    for (const auto& c : row.columns) {
      out << ',' << fixed2(c.mean) << ',' << fixed2(c.stddev) << ',' << (c.bold ? 1 : 0);
    }
    if (phi) {
      out << ',' << (row.phi_mean ? fixed2(*row.phi_mean) : "") << ','
          << (row.phi_std ? fixed2(*row.phi_std) : "");
    }
    out << '\n';
  }
  return out.str();
}

std::string emit_markdown(std::span<const SummaryRow> rows) {
  const bool phi = has_phi(rows);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"condition"};
  for (const auto& c : rows.front().columns) header.push_back(c.name);
  if (phi) header.push_back("phi_hat");
  cells.push_back(header);
  for (const auto& row : rows) {
    std::vector<std::string> line{row.condition};
    for (const auto& c : row.columns) {
      const std::string text = fixed2(c.mean) + " +- " + fixed2(c.stddev);
      line.push_back(c.bold ? "**" + text + "**" : text);
    }
    if (phi) {
      line.push_back(row.phi_mean ? fixed2(*row.phi_mean) + " +- " + fixed2(row.phi_std.value_or(0.0))
                                  : "");
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 3);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  auto emit_line = [&](const std::vector<std::string>& line) {
    out << '|';
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << ' ' << line[i] << std::string(width[i] - line[i].size(), ' ') << " |";
    }
    out << '\n';
  };
  emit_line(cells.front());
  out << '|';
  for (const auto w : width) out << std::string(w + 2, '-') << '|';
  out << '\n';
  for (std::size_t r = 1; r < cells.size(); ++r) emit_line(cells[r]);
  return out.str();
}

}  // namespace

std::string emit_table(std::span<const SummaryRow> rows, TableFormat format) {
  check_rows(rows);
  return format == TableFormat::csv ? emit_csv(rows) : emit_markdown(rows);
}

std::vector<ParsedRow> parse_csv_table(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  if (lines.empty()) throw std::invalid_argument("parse_csv_table: empty input");
  const auto header = split_csv_line(lines.front());
  if (header.empty() || header.front() != "condition") {
    throw std::invalid_argument("parse_csv_table: missing condition column");
  }
  const bool phi = header.size() >= 3 && header[header.size() - 2] == "phi_mean";
  const std::size_t method_fields = header.size() - 1 - (phi ? 2 : 0);
  if (method_fields % 3 != 0) throw std::invalid_argument("parse_csv_table: malformed header");

  std::vector<ParsedRow> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_csv_line(lines[l]);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("parse_csv_table: row " + std::to_string(l) + " has wrong width");
    }
    ParsedRow row;
    row.condition = fields[0];
    for (std::size_t i = 0; i < method_fields / 3; ++i) {
      const std::string& name = header[1 + 3 * i];
      ParsedColumn c;
      c.name = name.substr(0, name.size() - std::string("_mean").size());
      c.mean = std::stod(fields[1 + 3 * i]);
      c.stddev = std::stod(fields[2 + 3 * i]);
      c.bold = fields[3 + 3 * i] == "1";
      row.columns.push_back(std::move(c));
    }
    if (phi) {
      const auto& pm = fields[fields.size() - 2];
      const auto& ps = fields[fields.size() - 1];
      if (!pm.empty()) row.phi_mean = std::stod(pm);
      if (!ps.empty()) row.phi_std = std::stod(ps);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pbn
