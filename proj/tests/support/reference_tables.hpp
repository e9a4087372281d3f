#pragma once

// Published per-object values and their printed summary rows, replayed
// through ReportTable to check the aggregation and rounding.

#include <array>
#include <string>

namespace reference {

struct Column {
  std::string label;
  std::array<double, 10> values;
  std::string printed_summary;
};

// ADD(-S) recall per object, 2 decimals.
inline const std::array<Column, 4> kPoseRecall = {{
    {"Vanilla", {0.31, 0.27, 0.20, 0.25, 0.29, 0.24, 0.24, 0.29, 0.31, 0.07}, "0.25"},
    {"Canny", {0.26, 0.25, 0.40, 0.25, 0.31, 0.30, 0.35, 0.26, 0.25, 0.02}, "0.27"},
    {"HED", {0.19, 0.26, 0.39, 0.16, 0.05, 0.32, 0.25, 0.36, 0.35, 0.03}, "0.23"},
    {"RGB Canny", {0.13, 0.33, 0.27, 0.16, 0.24, 0.33, 0.25, 0.42, 0.31, 0.15}, "0.26"},
}};

// Detection precision and recall per object in percent, 1 decimal.
inline const std::array<Column, 4> kPrecision = {{
    {"Vanilla", {8.7, 48.7, 39.4, 36.6, 26.8, 68.8, 16.4, 25.2, 41.8, 2.0}, "31.4"},
    {"Canny", {25.9, 36.4, 35.8, 26.7, 29.0, 40.3, 1.3, 34.8, 45.7, 5.4}, "28.1"},
    {"HED", {25.8, 36.3, 35.7, 26.8, 29.0, 40.3, 1.3, 34.7, 45.6, 5.4}, "28.1"},
    {"RGB Canny", {6.9, 38.7, 25.5, 33.0, 33.1, 25.9, 12.4, 37.8, 45.5, 2.0}, "26.1"},
}};

inline const std::array<Column, 4> kRecall = {{
    {"Vanilla", {15.9, 31.1, 30.6, 30.4, 27.8, 34.9, 22.7, 29.5, 34.3, 8.1}, "26.5"},
    {"Canny", {22.3, 30.7, 32.3, 27.9, 30.6, 32.8, 0.5, 34.0, 38.5, 12.8}, "26.2"},
    {"HED", {22.3, 30.7, 32.4, 28.0, 30.6, 32.8, 0.5, 34.0, 38.4, 12.8}, "26.2"},
    {"RGB Canny", {16.3, 31.2, 28.4, 28.8, 29.6, 25.8, 19.5, 34.1, 37.1, 7.6}, "25.8"},
}};

}  // namespace reference
