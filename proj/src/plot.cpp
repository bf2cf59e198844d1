#include "drsub/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "drsub/common.hpp"

namespace drsub {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 72, kRight = 700, kTop = 44, kBottom = 428;
const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                "#d62728", "#9467bd", "#8c564b"};
constexpr int kPaletteSize = 6;
constexpr int kTicks = 5;

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                             const std::string& x_label, const std::string& y_label) {
  if (series.empty()) throw ParamError("render_line_plot: no series");
  const std::size_t T = series.front().y.size();
  if (T == 0) throw ParamError("render_line_plot: empty series");
  double y_min = series.front().y.front(), y_max = y_min;
  for (const PlotSeries& s : series) {
    if (s.y.size() != T)
      throw ParamError("render_line_plot: series lengths differ");
    for (double v : s.y) {
      if (!std::isfinite(v)) throw ParamError("render_line_plot: non-finite value");
      y_min = std::min(y_min, v);
      y_max = std::max(y_max, v);
    }
  }
  if (y_max == y_min) {
    y_min -= 1.0;
    y_max += 1.0;
  } else {
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
  }
  const double x_min = 1.0, x_max = static_cast<double>(T);
  const auto sx = [&](double x) {
    return T == 1 ? 0.5 * (kLeft + kRight)
                  : kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft);
  };
  const auto sy = [&](double y) {
    return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n"
      << "<text x=\"" << 0.5 * (kLeft + kRight)
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << escape_xml(title) << "</text>\n";

  // axes, ticks, grid
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
      << "\" height=\"" << kBottom - kTop
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = x_min + (x_max - x_min) * i / kTicks;
    const double fy = y_min + (y_max - y_min) * i / kTicks;
    const double px = sx(fx), py = sy(fy);
    svg << "<line x1=\"" << fmt6(px) << "\" y1=\"" << kTop << "\" x2=\"" << fmt6(px)
        << "\" y2=\"" << kBottom << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << fmt6(py) << "\" x2=\"" << kRight
        << "\" y2=\"" << fmt6(py) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << fmt6(px) << "\" y=\"" << kBottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt6(fx) << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt6(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt6(fy)
        << "</text>\n";
  }
  svg << "<text x=\"" << 0.5 * (kLeft + kRight) << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_xml(x_label) << "</text>\n"
      << "<text x=\"18\" y=\"" << 0.5 * (kTop + kBottom)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << 0.5 * (kTop + kBottom) << ")\">" << escape_xml(y_label) << "</text>\n";

  // curves
  for (std::size_t s = 0; s < series.size(); ++s) {
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[s % kPaletteSize]
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < T; ++i) {
      if (i) svg << ' ';
      svg << fmt6(sx(static_cast<double>(i + 1))) << ',' << fmt6(sy(series[s].y[i]));
    }
    svg << "\"/>\n";
  }

  // legend
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double ly = kTop + 16 + 18 * static_cast<double>(s);
    svg << "<line x1=\"" << kRight - 150 << "\" y1=\"" << fmt6(ly - 4) << "\" x2=\""
        << kRight - 126 << "\" y2=\"" << fmt6(ly - 4) << "\" stroke=\""
        << kPalette[s % kPaletteSize] << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kRight - 120 << "\" y=\"" << fmt6(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(series[s].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::string& content, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_text_file: cannot open " + path);
  out << content;
  if (!out) throw Error("write_text_file: write failed for " + path);
}

}  // namespace drsub
