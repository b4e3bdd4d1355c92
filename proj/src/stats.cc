// codeprobe/stats.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace codeprobe {

namespace {

struct CentralMoments {
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

CentralMoments central_moments(std::span<const double> xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  CentralMoments m;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    m.m2 += d2;
    m.m3 += d2 * d;
    m.m4 += d2 * d2;
  }
  m.m2 /= n;
  m.m3 /= n;
  m.m4 /= n;
  return m;
}

double variance_sum(std::span<const double> xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss;
}

}  // namespace

CorrelationKind correlation_kind_from_string(const std::string &name) {
  if (name == "pearson") return CorrelationKind::kPearson;
  if (name == "spearman") return CorrelationKind::kSpearman;
  throw std::invalid_argument("unknown correlation kind \"" + name + "\"");
}

const char *to_string(CorrelationKind kind) {
  return kind == CorrelationKind::kPearson ? "pearson" : "spearman";
}

double skewness(std::span<const double> xs) {
  if (xs.size() < 3)
    throw std::invalid_argument("skewness: degenerate sample (n < 3)");
  const CentralMoments m = central_moments(xs);
  if (m.m2 <= 0.0)
    throw std::invalid_argument("skewness: degenerate sample (zero variance)");
  return m.m3 / std::pow(m.m2, 1.5);
}

double excess_kurtosis(std::span<const double> xs) {
  if (xs.size() < 4)
    throw std::invalid_argument("excess_kurtosis: degenerate sample (n < 4)");
  const CentralMoments m = central_moments(xs);
  if (m.m2 <= 0.0)
    throw std::invalid_argument(
        "excess_kurtosis: degenerate sample (zero variance)");
  return m.m4 / (m.m2 * m.m2) - 3.0;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("pearson: length mismatch");
  if (xs.size() < 2)
    throw std::invalid_argument("pearson: need at least 2 points");
  const auto n = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mean_x;
    const double dy = ys[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 && syy <= 0.0)
    throw std::domain_error("pearson: zero variance in both inputs");
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> ranks(std::span<const double> xs) {
  std::vector<size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&xs](size_t a, size_t b) { return xs[a] < xs[b]; });
  std::vector<double> out(xs.size(), 0.0);
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) out[order[k]] = shared;
    i = j + 1;
  }
  return out;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  const auto rx = ranks(xs);
  const auto ry = ranks(ys);
  return pearson(rx, ry);
}

double metric_correlation(std::span<const double> xs,
                          std::span<const double> ys, CorrelationKind kind) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("metric_correlation: length mismatch");
  if (xs.size() < 3)
    throw std::invalid_argument("metric_correlation: need at least 3 points");
  return kind == CorrelationKind::kPearson ? pearson(xs, ys)
                                           : spearman(xs, ys);
}

std::vector<std::pair<double, double>> loess(
    std::span<const std::pair<double, double>> points, double span) {
  const size_t n = points.size();
  if (n < 3) throw std::invalid_argument("loess: need at least 3 points");
  if (span <= 0.0 || span > 1.0)
    throw std::invalid_argument("loess: span must be in (0, 1]");
  const auto window =
      static_cast<size_t>(std::ceil(span * static_cast<double>(n)));
  if (window < 2)
    throw std::invalid_argument("loess: insufficient points in window");

  // Sort a copy by (x, y) so neighbor selection is order-independent.
  std::vector<std::pair<double, double>> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());

  auto fit_at = [&sorted, window](double x0) {
    const size_t n_pts = sorted.size();
    // Nearest `window` points by |x - x0| via a sliding interval.
    size_t lo = static_cast<size_t>(
        std::lower_bound(sorted.begin(), sorted.end(),
                         std::make_pair(x0, -std::numeric_limits<double>::infinity())) -
        sorted.begin());
    size_t hi = lo;  // [lo, hi) is the selected window
    while (hi - lo < window) {
      const bool can_left = lo > 0;
      const bool can_right = hi < n_pts;
      if (can_left && can_right) {
        if (x0 - sorted[lo - 1].first <= sorted[hi].first - x0)
          --lo;
        else
          ++hi;
      } else if (can_left) {
        --lo;
      } else {
        ++hi;
      }
    }
    double max_dist = 0.0;
    for (size_t k = lo; k < hi; ++k)
      max_dist = std::max(max_dist, std::abs(sorted[k].first - x0));
    // Weighted linear fit via the 2x2 normal equations.
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (size_t k = lo; k < hi; ++k) {
      const double d = std::abs(sorted[k].first - x0);
      double w = 1.0;
      if (max_dist > 0.0) {
        const double u = d / max_dist;
        const double t = 1.0 - u * u * u;
        w = t * t * t;
      }
      if (w <= 0.0) continue;
      sw += w;
      swx += w * sorted[k].first;
      swy += w * sorted[k].second;
      swxx += w * sorted[k].first * sorted[k].first;
      swxy += w * sorted[k].first * sorted[k].second;
    }
    if (sw <= 0.0)
      throw std::invalid_argument("loess: insufficient points in window");
    const double det = sw * swxx - swx * swx;
    if (std::abs(det) <= 1e-12 * std::max(1.0, sw * swxx)) {
      return swy / sw;  // all usable x coincide: weighted mean
    }
    const double slope = (sw * swxy - swx * swy) / det;
    const double intercept = (swy - slope * swx) / sw;
    return intercept + slope * x0;
  };

  std::vector<std::pair<double, double>> fitted;
  fitted.reserve(n);
  for (const auto &p : points) fitted.emplace_back(p.first, fit_at(p.first));
  return fitted;
}

}  // namespace codeprobe
