#pragma once

#include <optional>
#include <string>
#include <vector>

namespace edgepose {

enum class ReportFormat { kMarkdown, kCsv };

struct ReportColumn {
  std::string label;
  int decimals = 2;
  // Applied at render time only (100 for percentages).
  double scale = 1.0;
};

struct ReportRow {
  std::string label;
  std::vector<std::optional<double>> cells;  // nullopt renders as U+2014
};

// Per-object rows plus a summary row holding the mean of each column's
// defined cells. Values keep full precision until rendering.
class ReportTable {
 public:
  ReportTable(std::string key_label, std::vector<ReportColumn> columns,
              std::string summary_label);

  void add_row(std::string label, std::vector<std::optional<double>> cells);

  const std::vector<ReportColumn> &columns() const { return columns_; }
  const std::vector<ReportRow> &rows() const { return rows_; }
  const std::string &summary_label() const { return summary_label_; }

  // Mean of defined cells per column; nullopt when a column has none.
  std::vector<std::optional<double>> summary() const;

  // Rendered text of one cell, U+2014 when undefined.
  std::string format_cell(std::size_t column, std::optional<double> value) const;

  std::string render(ReportFormat format) const;
  std::string render_markdown() const;
  std::string render_csv() const;

 private:
  std::string key_label_;
  std::vector<ReportColumn> columns_;
  std::string summary_label_;
  std::vector<ReportRow> rows_;
};

inline constexpr const char *kUndefinedCell = "\xE2\x80\x94";

// Fixed-point rendering, round half away from zero on the decimal value.
// Binary representation error below 1e-6 of the last printed digit is
// ignored, so 0.265 renders as 0.27 at two decimals however it was summed.
std::string format_fixed(double value, int decimals);

}  // namespace edgepose
