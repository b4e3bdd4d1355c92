// codeprobe/plot.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/plot.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "codeprobe/report.h"

namespace codeprobe {

namespace {

constexpr double kPanelWidth = 360.0;
constexpr double kPanelHeight = 240.0;
constexpr double kMargin = 46.0;

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded_range(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  double pad = (hi - lo) * 0.08;
  if (pad <= 0.0) pad = std::max(1e-3, std::abs(hi) * 0.1 + 1e-3);
  return {lo - pad, hi + pad};
}

}  // namespace

void write_metric_panels_svg(const std::string &path,
                             const std::map<std::string, MetricSeries> &series,
                             const std::string &x_label, double loess_span) {
  const size_t n_panels = series.size();
  if (n_panels == 0) throw std::invalid_argument("plot: no series to render");
  const size_t columns = n_panels >= 2 ? 2 : 1;
  const size_t rows = (n_panels + columns - 1) / columns;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << columns * kPanelWidth << "\" height=\"" << rows * kPanelHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  size_t panel = 0;
  for (const auto &[metric, points] : series) {
    const double ox = static_cast<double>(panel % columns) * kPanelWidth;
    const double oy = static_cast<double>(panel / columns) * kPanelHeight;
    ++panel;
    if (points.empty()) continue;

    double x_lo = points.front().x, x_hi = points.front().x;
    double y_lo = points.front().y, y_hi = points.front().y;
    for (const MetricPoint &p : points) {
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
      y_lo = std::min(y_lo, p.y);
      y_hi = std::max(y_hi, p.y);
    }
    const Range xr = padded_range(x_lo, x_hi);
    const Range yr = padded_range(y_lo, y_hi);
    auto sx = [&](double x) {
      return ox + kMargin +
             (x - xr.lo) / (xr.hi - xr.lo) * (kPanelWidth - 1.6 * kMargin);
    };
    auto sy = [&](double y) {
      return oy + kPanelHeight - kMargin -
             (y - yr.lo) / (yr.hi - yr.lo) * (kPanelHeight - 1.6 * kMargin);
    };

    // Frame, title, axis end labels.
    svg << "<rect x=\"" << sx(xr.lo) << "\" y=\"" << sy(yr.hi) << "\" width=\""
        << sx(xr.hi) - sx(xr.lo) << "\" height=\"" << sy(yr.lo) - sy(yr.hi)
        << "\" fill=\"none\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << ox + kPanelWidth / 2 << "\" y=\"" << oy + 16
        << "\" text-anchor=\"middle\" font-weight=\"bold\">" << metric
        << "</text>\n";
    svg << "<text x=\"" << ox + kPanelWidth / 2 << "\" y=\""
        << oy + kPanelHeight - 8 << "\" text-anchor=\"middle\">" << x_label
        << "</text>\n";
    svg << "<text x=\"" << sx(xr.lo) - 4 << "\" y=\"" << sy(yr.lo)
        << "\" text-anchor=\"end\">" << format_double(y_lo) << "</text>\n";
    svg << "<text x=\"" << sx(xr.lo) - 4 << "\" y=\"" << sy(yr.hi) + 8
        << "\" text-anchor=\"end\">" << format_double(y_hi) << "</text>\n";

    for (const MetricPoint &p : points) {
      svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
          << "\" r=\"2.6\" fill=\"#222\"/>\n";
    }

    if (points.size() >= 3) {
      std::vector<std::pair<double, double>> raw;
      raw.reserve(points.size());
      for (const MetricPoint &p : points) raw.emplace_back(p.x, p.y);
      auto fitted = loess(raw, loess_span);
      std::sort(fitted.begin(), fitted.end());
      fitted.erase(std::unique(fitted.begin(), fitted.end()), fitted.end());
      svg << "<polyline fill=\"none\" stroke=\"#c22\" stroke-width=\"1.6\" points=\"";
      for (const auto &[x, y] : fitted) svg << sx(x) << ',' << sy(y) << ' ';
      svg << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  write_text_file(path, svg.str());
}

}  // namespace codeprobe
