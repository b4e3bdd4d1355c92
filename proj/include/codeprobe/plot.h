// codeprobe/plot.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_PLOT_H_
#define CODEPROBE_PLOT_H_

#include <map>
#include <string>

#include "codeprobe/stats.h"

namespace codeprobe {

// Renders one panel per metric (scatter of cell values plus a LOESS curve)
// into a standalone SVG file. x_label describes the swept factor.
void write_metric_panels_svg(const std::string &path,
                             const std::map<std::string, MetricSeries> &series,
                             const std::string &x_label, double loess_span);

}  // namespace codeprobe

#endif  // CODEPROBE_PLOT_H_
