// codeprobe/infometrics.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_INFOMETRICS_H_
#define CODEPROBE_INFOMETRICS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace codeprobe {

// Empirical joint counts over (code, label) frame pairs. Dense table; codes
// index rows, labels index columns.
struct JointHistogram {
  size_t n_codes = 0;
  size_t n_labels = 0;
  std::vector<uint64_t> counts;  // row-major, n_codes * n_labels
  uint64_t total = 0;

  uint64_t at(size_t code, size_t label) const {
    return counts[code * n_labels + label];
  }
  uint64_t &at(size_t code, size_t label) {
    return counts[code * n_labels + label];
  }

  std::vector<uint64_t> code_marginal() const;
  std::vector<uint64_t> label_marginal() const;

  // Elementwise sum; dimensions are unified to the max of both operands.
  JointHistogram &operator+=(const JointHistogram &other);
};

// counts[x][y] = |{t : codes[t] == x, labels[t] == y}|. Table dimensions are
// max(observed + 1, n_codes/n_labels hints). Lengths must match and be >= 1.
JointHistogram build_histogram(std::span<const int32_t> codes,
                               std::span<const int32_t> labels,
                               size_t n_codes = 0, size_t n_labels = 0);

enum class Axis { kCode, kLabel };

// Shannon entropy of the chosen marginal, in nats.
double entropy(const JointHistogram &h, Axis axis);

// Empirical conditional entropy H(label | code) (or the transpose), nats.
double conditional_entropy(const JointHistogram &h, Axis given);

// Empirical mutual information, nats, with the 0 log 0 = 0 convention.
double mutual_information(const JointHistogram &h);

// 2 I / (H(code) + H(label)). Throws "NMI undefined" when both marginals are
// point masses.
double nmi(const JointHistogram &h);

JointHistogram transpose(const JointHistogram &h);

}  // namespace codeprobe

#endif  // CODEPROBE_INFOMETRICS_H_
