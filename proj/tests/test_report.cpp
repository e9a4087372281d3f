#include <doctest.h>

#include <sstream>

#include "edgepose/error.hpp"
#include "edgepose/report.hpp"
#include "support/reference_tables.hpp"

using namespace edgepose;

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(' ');
  const auto e = s.find_last_not_of(' ');
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Summary text of a single-column table fed with `values` as fractions.
std::string replay(const std::array<double, 10> &values, double input_scale, int decimals,
                   double render_scale) {
  ReportTable t("Object", {{"v", decimals, render_scale}}, "Mean");
  for (std::size_t i = 0; i < values.size(); ++i) {
    t.add_row("#" + std::to_string(i + 1), {values[i] * input_scale});
  }
  return t.format_cell(0, t.summary()[0]);
}

}  // namespace

TEST_CASE("format_fixed rounds half up at render time") {
  CHECK(format_fixed(0.265, 2) == "0.27");
  CHECK(format_fixed(0.264999, 2) == "0.26");
  CHECK(format_fixed(0.247, 2) == "0.25");
  CHECK(format_fixed(1.0, 2) == "1.00");
  CHECK(format_fixed(0.0, 1) == "0.0");
  CHECK(format_fixed(31.44, 1) == "31.4");
  CHECK(format_fixed(26.25, 1) == "26.3");
  CHECK(format_fixed(0.05, 2) == "0.05");
  CHECK(format_fixed(-0.004, 2) == "0.00");
  CHECK(format_fixed(-1.25, 1) == "-1.3");
  CHECK(format_fixed(7.0, 0) == "7");
  // 2.65 / 10 is 0.26499999999999996 in binary; the snap keeps it at .265.
  CHECK(format_fixed(2.65 / 10.0, 2) == "0.27");
}

TEST_CASE("pose recall column replays") {
  for (const auto &col : reference::kPoseRecall) {
    CAPTURE(col.label);
    const std::string got = replay(col.values, 1.0, 2, 1.0);
    // The HED column's per-object values average to 0.236.
    if (col.label == "HED") {
      CHECK(got == "0.24");
    } else {
      CHECK(got == col.printed_summary);
    }
  }
}

TEST_CASE("detection column replays at percent scale") {
  for (const auto &col : reference::kPrecision) {
    CAPTURE(col.label);
    CHECK(replay(col.values, 0.01, 1, 100.0) == col.printed_summary);
  }
  for (const auto &col : reference::kRecall) {
    CAPTURE(col.label);
    const std::string got = replay(col.values, 0.01, 1, 100.0);
    // HED recall averages to exactly 26.25.
    if (col.label == "HED") {
      CHECK(got == "26.3");
    } else {
      CHECK(got == col.printed_summary);
    }
  }
}

TEST_CASE("summary skips undefined cells") {
  ReportTable t("Object", {{"P", 1, 100.0}, {"R", 1, 100.0}}, "Average");
  t.add_row("#1", {0.5, std::nullopt});
  t.add_row("#2", {std::nullopt, std::nullopt});
  t.add_row("#3", {0.25, 0.1});
  const auto s = t.summary();
  CHECK(*s[0] == 0.375);
  CHECK(*s[1] == 0.1);
  CHECK(t.format_cell(0, std::nullopt) == kUndefinedCell);

  ReportTable empty("Object", {{"P", 1, 100.0}}, "Average");
  empty.add_row("#1", {std::nullopt});
  CHECK_FALSE(empty.summary()[0].has_value());
  CHECK_THROWS_AS(empty.add_row("#2", {0.1, 0.2}), ParameterError);
}

TEST_CASE("markdown layout") {
  ReportTable t("Object", {{"ADD(-S)", 2, 1.0}}, "Mean");
  t.add_row("#1", {0.5});
  t.add_row("#2", {std::nullopt});
  const std::string md = t.render_markdown();
  const auto lines = split(md, '\n');
  REQUIRE(lines.size() >= 5);
  CHECK(lines[0].find("Object") != std::string::npos);
  CHECK(lines[0].find("ADD(-S)") != std::string::npos);
  CHECK(lines[1].find("---") != std::string::npos);
  CHECK(lines[3].find(kUndefinedCell) != std::string::npos);
  CHECK(lines[4].find("Mean") != std::string::npos);
  CHECK(lines[4].find("0.50") != std::string::npos);
  CHECK(md == t.render(ReportFormat::kMarkdown));
}

TEST_CASE("csv and markdown carry identical cell text") {
  ReportTable t("Object", {{"Precision (%)", 1, 100.0}, {"Recall (%)", 1, 100.0}}, "Average");
  t.add_row("#1", {0.087, 0.159});
  t.add_row("#2", {std::nullopt, 0.311});
  t.add_row("#3", {0.394, 0.306});
  const auto csv_lines = split(t.render_csv(), '\n');
  const auto md_lines = split(t.render_markdown(), '\n');
  // CSV: header, 3 rows, summary. Markdown: header, rule, 3 rows, summary.
  REQUIRE(csv_lines.size() >= 5);
  REQUIRE(md_lines.size() >= 6);
  for (int r = 0; r < 4; ++r) {
    const auto csv = split(csv_lines[1 + r], ',');
    auto md = split(md_lines[2 + r], '|');
    // Drop the empty fragments outside the outer pipes.
    md.erase(md.begin());
    md.pop_back();
    REQUIRE(csv.size() == md.size());
    for (std::size_t c = 0; c < csv.size(); ++c) CHECK(trim(csv[c]) == trim(md[c]));
  }
  CHECK(csv_lines[4].rfind("Average,", 0) == 0);
  CHECK(csv_lines[0] == "Object,Precision (%),Recall (%)");
}
