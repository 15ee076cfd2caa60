#pragma once

#include <string>
#include <vector>

namespace manip::harness {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> std;  // empty: no band
};

struct PlotStyle {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 400;
  bool fix_y = false;  // use y_min / y_max instead of the data range
  double y_min = 0.0;
  double y_max = 1.0;
};

// Standalone SVG documents. Throws std::invalid_argument on empty input or
// mismatched lengths.
std::string line_plot_svg(const std::vector<Series>& series, const PlotStyle& style);

// One bar per label with a +-std whisker; NaN means are drawn as "n/a".
std::string bar_plot_svg(const std::vector<std::string>& labels, const std::vector<double>& mean,
                         const std::vector<double>& std, const PlotStyle& style);

// values[r][c]; NaN cells are hatched as missing.
std::string heatmap_svg(const std::vector<std::string>& row_labels, const std::vector<std::string>& col_labels,
                        const std::vector<std::vector<double>>& values, const PlotStyle& style);

void write_text_file(const std::string& path, const std::string& text);

std::string xml_escape(const std::string& s);

}  // namespace manip::harness
