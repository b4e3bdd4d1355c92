// codeprobe/probe.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_PROBE_H_
#define CODEPROBE_PROBE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "codeprobe/corpus.h"
#include "codeprobe/infometrics.h"

namespace codeprobe {

struct FramePair {
  int32_t code = 0;
  int32_t label = 0;
};

// Logistic classifier whose weights are log empirical conditionals
// W[y][x] = ln P(y | x), so its cross-entropy on the fitting data is the
// empirical conditional entropy H(Y | X). Codes without fitting support get
// a uniform column.
class ClosedFormProbe {
 public:
  static constexpr double kDefaultEpsilon = 1e-12;

  size_t n_codes() const { return n_codes_; }
  size_t n_labels() const { return n_labels_; }

  // ln P(label | code); uniform ln(1/L) for codes never seen at fit time.
  double log_prob(int32_t code, int32_t label) const;
  int32_t predict(int32_t code) const;  // argmax, lowest label on ties
  double weight(size_t label, size_t code) const {
    return weights_[label * n_codes_ + code];
  }
  bool seen(int32_t code) const {
    return code >= 0 && static_cast<size_t>(code) < n_codes_ && seen_[code];
  }

  std::string to_json() const;
  static ClosedFormProbe from_json(const std::string &text);

  friend ClosedFormProbe fit_closed_form(const JointHistogram &h,
                                         double epsilon);

 private:
  size_t n_codes_ = 0;
  size_t n_labels_ = 0;
  std::vector<double> weights_;  // n_labels x n_codes
  std::vector<uint8_t> seen_;    // per code
};

ClosedFormProbe fit_closed_form(const JointHistogram &h,
                                double epsilon = ClosedFormProbe::kDefaultEpsilon);

struct TrainerConfig {
  double learning_rate = 0.1;
  int epochs = 200;
  double l2 = 1e-4;
  uint64_t seed = 0;
};

// Multinomial logistic regression trained with full-batch gradient descent
// from zero-initialized weights. For one-hot code inputs the joint histogram
// is a sufficient statistic, which keeps each epoch at O(codes * labels).
class TrainedProbe {
 public:
  size_t n_inputs() const { return n_inputs_; }
  size_t n_labels() const { return n_labels_; }

  // ln P(label | code); uniform for codes never seen at training time.
  double log_prob(int32_t code, int32_t label) const;
  int32_t predict(int32_t code) const;

  // Dense-feature interface (used by the speaker probe).
  int32_t predict_dense(std::span<const double> features) const;

  const std::vector<double> &weights() const { return weights_; }
  const std::vector<double> &bias() const { return bias_; }
  // Mean cross-entropy (plus L2 term) per epoch, for convergence checks.
  const std::vector<double> &epoch_losses() const { return epoch_losses_; }

  std::string to_json() const;
  static TrainedProbe from_json(const std::string &text);

  friend TrainedProbe train_logistic(std::span<const FramePair> frames,
                                     const TrainerConfig &config,
                                     size_t n_codes, size_t n_labels);
  friend TrainedProbe train_logistic_dense(
      std::span<const std::vector<double>> features,
      std::span<const int32_t> labels, const TrainerConfig &config,
      size_t n_labels);

 private:
  std::vector<double> logits(int32_t code) const;

  size_t n_inputs_ = 0;
  size_t n_labels_ = 0;
  std::vector<double> weights_;  // n_labels x n_inputs
  std::vector<double> bias_;     // n_labels
  std::vector<uint8_t> seen_;    // per one-hot input; empty for dense probes
  std::vector<double> epoch_losses_;
};

// One-hot-input probe on (code, label) frames. Requires at least two
// distinct labels. n_codes/n_labels of 0 are inferred from the data.
TrainedProbe train_logistic(std::span<const FramePair> frames,
                            const TrainerConfig &config, size_t n_codes = 0,
                            size_t n_labels = 0);

// Dense-feature probe (features are row vectors of equal dimension).
TrainedProbe train_logistic_dense(std::span<const std::vector<double>> features,
                                  std::span<const int32_t> labels,
                                  const TrainerConfig &config,
                                  size_t n_labels = 0);

// Mean negative log probability of the true label, nats.
double cross_entropy(const ClosedFormProbe &probe,
                     std::span<const FramePair> frames);
double cross_entropy(const TrainedProbe &probe,
                     std::span<const FramePair> frames);

double accuracy(const ClosedFormProbe &probe, std::span<const FramePair> frames);
double accuracy(const TrainedProbe &probe, std::span<const FramePair> frames);

// Normalized per-utterance code frequency vector of dimension codebook_size.
std::vector<double> code_frequency_vector(const CodeSequence &sequence);

// Speaker identification from bag-of-codes vectors: utterance-level halves
// split, train on one half, return accuracy on the other. Every speaker must
// land in both halves.
double speaker_probe(std::span<const CodeSequence> corpus, uint64_t split_seed,
                     const TrainerConfig &config);

}  // namespace codeprobe

#endif  // CODEPROBE_PROBE_H_
