// codeprobe/infometrics.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/infometrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace codeprobe {

namespace {

double entropy_of_counts(std::span<const uint64_t> counts, uint64_t total) {
  double h = 0.0;
  const auto n = static_cast<double>(total);
  for (uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return h < 0.0 ? 0.0 : h;
}

void check_valid(const JointHistogram &h) {
  if (h.total == 0 || h.n_codes == 0 || h.n_labels == 0)
    throw std::invalid_argument("histogram is empty");
}

}  // namespace

std::vector<uint64_t> JointHistogram::code_marginal() const {
  std::vector<uint64_t> marginal(n_codes, 0);
  for (size_t x = 0; x < n_codes; ++x)
    for (size_t y = 0; y < n_labels; ++y) marginal[x] += at(x, y);
  return marginal;
}

std::vector<uint64_t> JointHistogram::label_marginal() const {
  std::vector<uint64_t> marginal(n_labels, 0);
  for (size_t x = 0; x < n_codes; ++x)
    for (size_t y = 0; y < n_labels; ++y) marginal[y] += at(x, y);
  return marginal;
}

JointHistogram &JointHistogram::operator+=(const JointHistogram &other) {
  JointHistogram merged;
  merged.n_codes = std::max(n_codes, other.n_codes);
  merged.n_labels = std::max(n_labels, other.n_labels);
  merged.counts.assign(merged.n_codes * merged.n_labels, 0);
  merged.total = total + other.total;
  for (size_t x = 0; x < n_codes; ++x)
    for (size_t y = 0; y < n_labels; ++y) merged.at(x, y) += at(x, y);
  for (size_t x = 0; x < other.n_codes; ++x)
    for (size_t y = 0; y < other.n_labels; ++y) merged.at(x, y) += other.at(x, y);
  *this = std::move(merged);
  return *this;
}

JointHistogram build_histogram(std::span<const int32_t> codes,
                               std::span<const int32_t> labels,
                               size_t n_codes, size_t n_labels) {
  if (codes.size() != labels.size())
    throw std::invalid_argument("build_histogram: length mismatch (" +
                                std::to_string(codes.size()) + " codes vs " +
                                std::to_string(labels.size()) + " labels)");
  if (codes.empty())
    throw std::invalid_argument("build_histogram: empty inputs");

  JointHistogram h;
  h.n_codes = n_codes;
  h.n_labels = n_labels;
  for (size_t t = 0; t < codes.size(); ++t) {
    if (codes[t] < 0 || labels[t] < 0)
      throw std::invalid_argument("build_histogram: negative code or label");
    h.n_codes = std::max(h.n_codes, static_cast<size_t>(codes[t]) + 1);
    h.n_labels = std::max(h.n_labels, static_cast<size_t>(labels[t]) + 1);
  }
  h.counts.assign(h.n_codes * h.n_labels, 0);
  for (size_t t = 0; t < codes.size(); ++t)
    ++h.at(static_cast<size_t>(codes[t]), static_cast<size_t>(labels[t]));
  h.total = codes.size();
  return h;
}

double entropy(const JointHistogram &h, Axis axis) {
  check_valid(h);
  const auto marginal =
      axis == Axis::kCode ? h.code_marginal() : h.label_marginal();
  return entropy_of_counts(marginal, h.total);
}

double conditional_entropy(const JointHistogram &h, Axis given) {
  check_valid(h);
  // H(other | given) = sum_g P(g) H(other | given = g)
  const bool given_code = given == Axis::kCode;
  const size_t n_given = given_code ? h.n_codes : h.n_labels;
  const size_t n_other = given_code ? h.n_labels : h.n_codes;
  double result = 0.0;
  const auto n = static_cast<double>(h.total);
  for (size_t g = 0; g < n_given; ++g) {
    uint64_t group = 0;
    for (size_t o = 0; o < n_other; ++o)
      group += given_code ? h.at(g, o) : h.at(o, g);
    if (group == 0) continue;
    double h_cond = 0.0;
    for (size_t o = 0; o < n_other; ++o) {
      const uint64_t c = given_code ? h.at(g, o) : h.at(o, g);
      if (c == 0) continue;
      const double p = static_cast<double>(c) / static_cast<double>(group);
      h_cond -= p * std::log(p);
    }
    result += static_cast<double>(group) / n * h_cond;
  }
  return result < 0.0 ? 0.0 : result;
}

double mutual_information(const JointHistogram &h) {
  check_valid(h);
  const auto code_marginal = h.code_marginal();
  const auto label_marginal = h.label_marginal();
  const auto n = static_cast<double>(h.total);
  double info = 0.0;
  for (size_t x = 0; x < h.n_codes; ++x) {
    if (code_marginal[x] == 0) continue;
    for (size_t y = 0; y < h.n_labels; ++y) {
      const uint64_t joint = h.at(x, y);
      if (joint == 0) continue;
      const double p_xy = static_cast<double>(joint) / n;
      // P(x,y) / (P(x) P(y)) = joint * N / (n_x * n_y), computed on counts to
      // avoid three separate divisions.
      info += p_xy * std::log(static_cast<double>(joint) * n /
                              (static_cast<double>(code_marginal[x]) *
                               static_cast<double>(label_marginal[y])));
    }
  }
  // Exact independence can land a hair below zero in floating point.
  return info < 0.0 && info > -1e-9 ? 0.0 : info;
}

double nmi(const JointHistogram &h) {
  const double h_code = entropy(h, Axis::kCode);
  const double h_label = entropy(h, Axis::kLabel);
  if (h_code + h_label <= 0.0)
    throw std::domain_error("NMI undefined: both marginals are point masses");
  return 2.0 * mutual_information(h) / (h_code + h_label);
}

JointHistogram transpose(const JointHistogram &h) {
  JointHistogram t;
  t.n_codes = h.n_labels;
  t.n_labels = h.n_codes;
  t.total = h.total;
  t.counts.assign(t.n_codes * t.n_labels, 0);
  for (size_t x = 0; x < h.n_codes; ++x)
    for (size_t y = 0; y < h.n_labels; ++y) t.at(y, x) = h.at(x, y);
  return t;
}

}  // namespace codeprobe
