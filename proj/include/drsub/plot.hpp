#pragma once

#include <string>
#include <vector>

namespace drsub {

// one curve, plotted against round index 1..y.size()
struct PlotSeries {
  std::string label;
  std::vector<double> y;
};

// deterministic standalone SVG line plot (fixed size, palette, and %.6g
// coordinate formatting: identical input always yields identical bytes);
// all series must share a common length
std::string render_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                             const std::string& x_label, const std::string& y_label);

void write_text_file(const std::string& content, const std::string& path);

}  // namespace drsub
