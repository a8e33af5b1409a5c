#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace vareff {

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
  int width = 720;
  int height = 480;
};

/// Emits a self-contained SVG line chart (axes, ticks, labels, polyline).
void write_line_chart(std::ostream& out, const LineChart& chart);

}  // namespace vareff
