// codeprobe/stats.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_STATS_H_
#define CODEPROBE_STATS_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace codeprobe {

enum class CorrelationKind { kPearson, kSpearman };

CorrelationKind correlation_kind_from_string(const std::string &name);
const char *to_string(CorrelationKind kind);

// Population-moment sample skewness g1 = m3 / m2^(3/2). Needs n >= 3 and
// nonzero variance.
double skewness(std::span<const double> xs);

// m4 / m2^2 - 3. Needs n >= 4 and nonzero variance.
double excess_kurtosis(std::span<const double> xs);

// Pearson correlation; 0 when exactly one side has zero variance (the
// caller decides whether to warn), throws when both are constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Average ranks (ties share the mean rank), 1-based.
std::vector<double> ranks(std::span<const double> xs);

double spearman(std::span<const double> xs, std::span<const double> ys);

// Correlation across matched configurations; lengths must match and be >= 3.
double metric_correlation(std::span<const double> xs,
                          std::span<const double> ys, CorrelationKind kind);

struct MetricPoint {
  double x = 0.0;
  double y = 0.0;
  std::string group;
};

using MetricSeries = std::vector<MetricPoint>;

// Locally weighted linear regression (tricube weights, one pass, degree 1)
// evaluated at each input x, returned in input order.
std::vector<std::pair<double, double>> loess(
    std::span<const std::pair<double, double>> points, double span);

}  // namespace codeprobe

#endif  // CODEPROBE_STATS_H_
