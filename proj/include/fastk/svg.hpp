#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fastk {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

// Log10-y line chart as a standalone SVG string. Points with non-positive or
// non-finite y are skipped (they cannot be placed on a log axis). Output is a
// pure function of the inputs.
std::string render_log_chart(const std::vector<PlotSeries>& series,
                             const std::string& title, const std::string& x_label,
                             const std::string& y_label);

}  // namespace fastk
