#include "fastk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fastk {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 560.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 180.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string render_log_chart(const std::vector<PlotSeries>& series,
                             const std::string& title, const std::string& x_label,
                             const std::string& y_label) {
  if (series.empty()) throw std::invalid_argument("no series to plot");

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  double ly_min = std::numeric_limits<double>::infinity();
  double ly_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || y <= 0) continue;
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      ly_min = std::min(ly_min, std::log10(y));
      ly_max = std::max(ly_max, std::log10(y));
    }
  }
  if (!std::isfinite(x_min)) {
    // Every point was unplottable; emit an empty frame rather than failing.
    x_min = 0; x_max = 1; ly_min = 0; ly_max = 1;
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (ly_max == ly_min) ly_max = ly_min + 1;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto py = [&](double ly) {
    return kMarginTop + (ly_max - ly) / (ly_max - ly_min) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // Axes frame
  svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
      << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // X ticks: 6 evenly spaced. Y ticks: integer decades.
  for (int i = 0; i <= 5; ++i) {
    const double x = x_min + (x_max - x_min) * i / 5.0;
    svg << "<line x1=\"" << fmt(px(x)) << "\" y1=\"" << fmt(kMarginTop + plot_h)
        << "\" x2=\"" << fmt(px(x)) << "\" y2=\"" << fmt(kMarginTop + plot_h + 6)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(kMarginTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt_tick(x) << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly_min)); e <= static_cast<int>(std::floor(ly_max)); ++e) {
    svg << "<line x1=\"" << fmt(kMarginLeft - 6) << "\" y1=\"" << fmt(py(e))
        << "\" x2=\"" << fmt(kMarginLeft) << "\" y2=\"" << fmt(py(e))
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(kMarginLeft - 10) << "\" y=\"" << fmt(py(e) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e"
        << e << "</text>\n";
    svg << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(py(e)) << "\" x2=\""
        << fmt(kMarginLeft + plot_w) << "\" y2=\"" << fmt(py(e))
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
  }

  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " << kHeight / 2 << ")\">" << y_label
      << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream pts;
    bool open = false;
    std::string paths;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(x) || !std::isfinite(y) || y <= 0) {
        if (open) {
          paths += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" points=\"" + pts.str() + "\"/>\n";
          pts.str("");
          open = false;
        }
        continue;
      }
      pts << fmt(px(x)) << ',' << fmt(py(std::log10(y))) << ' ';
      open = true;
    }
    if (open) {
      paths += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts.str() + "\"/>\n";
    }
    svg << paths;
    // Legend
    const double ly0 = kMarginTop + 14 + 20.0 * static_cast<double>(i);
    svg << "<line x1=\"" << fmt(kWidth - kMarginRight + 12) << "\" y1=\"" << fmt(ly0)
        << "\" x2=\"" << fmt(kWidth - kMarginRight + 40) << "\" y2=\"" << fmt(ly0)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt(kWidth - kMarginRight + 46) << "\" y=\"" << fmt(ly0 + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].name
        << "</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fastk
