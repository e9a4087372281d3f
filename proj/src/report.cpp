#include "edgepose/report.hpp"

#include <cmath>
#include <string>

#include "edgepose/error.hpp"

namespace edgepose {

namespace {

std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  if (decimals < 0 || decimals > 9) throw ParameterError("decimals must be in [0, 9]");
  const double scaled = value * std::pow(10.0, decimals);
  const double snapped = std::round(scaled * 1e6) / 1e6;
  const bool negative = snapped < 0.0;
  const auto units = static_cast<long long>(std::floor(std::abs(snapped) + 0.5));

  std::string digits = std::to_string(units);
  if (decimals > 0) {
    if (digits.size() <= static_cast<std::size_t>(decimals)) {
      digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  return (negative && units != 0 ? "-" : "") + digits;
}

ReportTable::ReportTable(std::string key_label, std::vector<ReportColumn> columns,
                         std::string summary_label)
    : key_label_(std::move(key_label)),
      columns_(std::move(columns)),
      summary_label_(std::move(summary_label)) {}

void ReportTable::add_row(std::string label,
                          std::vector<std::optional<double>> cells) {
  if (cells.size() != columns_.size()) {
    throw ParameterError("report row has " + std::to_string(cells.size()) +
                         " cells for " + std::to_string(columns_.size()) +
                         " columns");
  }
  rows_.push_back({std::move(label), std::move(cells)});
}

std::vector<std::optional<double>> ReportTable::summary() const {
  std::vector<std::optional<double>> out(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto &row : rows_) {
      if (!row.cells[c]) continue;
      sum += *row.cells[c];
      ++n;
    }
    if (n > 0) out[c] = sum / static_cast<double>(n);
  }
  return out;
}

std::string ReportTable::format_cell(std::size_t column,
                                     std::optional<double> value) const {
  if (!value) return kUndefinedCell;
  const ReportColumn &col = columns_.at(column);
  return format_fixed(*value * col.scale, col.decimals);
}

std::string ReportTable::render(ReportFormat format) const {
  return format == ReportFormat::kCsv ? render_csv() : render_markdown();
}

std::string ReportTable::render_markdown() const {
  std::string out = "| " + key_label_ + " |";
  for (const auto &c : columns_) out += " " + c.label + " |";
  out += "\n|:---|";
  for (std::size_t c = 0; c < columns_.size(); ++c) out += "---:|";
  out += "\n";
  auto emit = [&](const std::string &label,
                  const std::vector<std::optional<double>> &cells) {
    out += "| " + label + " |";
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += " " + format_cell(c, cells[c]) + " |";
    }
    out += "\n";
  };
  for (const auto &row : rows_) emit(row.label, row.cells);
  emit(summary_label_, summary());
  return out;
}

std::string ReportTable::render_csv() const {
  std::string out = csv_escape(key_label_);
  for (const auto &c : columns_) out += "," + csv_escape(c.label);
  out += "\n";
  auto emit = [&](const std::string &label,
                  const std::vector<std::optional<double>> &cells) {
    out += csv_escape(label);
    for (std::size_t c = 0; c < cells.size(); ++c) out += "," + format_cell(c, cells[c]);
    out += "\n";
  };
  for (const auto &row : rows_) emit(row.label, row.cells);
  emit(summary_label_, summary());
  return out;
}

}  // namespace edgepose
