// codeprobe/probe.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/probe.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace codeprobe {

namespace {

// Stable log-sum-exp over a logit row.
double log_sum_exp(std::span<const double> logits) {
  double max_logit = -std::numeric_limits<double>::infinity();
  for (double v : logits) max_logit = std::max(max_logit, v);
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - max_logit);
  return max_logit + std::log(sum);
}

size_t argmax_first(std::span<const double> values) {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

}  // namespace

ClosedFormProbe fit_closed_form(const JointHistogram &h, double epsilon) {
  if (h.total == 0) throw std::invalid_argument("fit_closed_form: empty histogram");
  if (epsilon < 0) throw std::invalid_argument("fit_closed_form: epsilon < 0");

  ClosedFormProbe probe;
  probe.n_codes_ = h.n_codes;
  probe.n_labels_ = h.n_labels;
  probe.weights_.assign(h.n_codes * h.n_labels, 0.0);
  probe.seen_.assign(h.n_codes, 0);

  const auto code_marginal = h.code_marginal();
  const double uniform = std::log(1.0 / static_cast<double>(h.n_labels));
  for (size_t x = 0; x < h.n_codes; ++x) {
    if (code_marginal[x] == 0) {
      for (size_t y = 0; y < h.n_labels; ++y)
        probe.weights_[y * h.n_codes + x] = uniform;
      continue;
    }
    probe.seen_[x] = 1;
    for (size_t y = 0; y < h.n_labels; ++y) {
      const double conditional = static_cast<double>(h.at(x, y)) /
                                 static_cast<double>(code_marginal[x]);
      probe.weights_[y * h.n_codes + x] =
          conditional > 0.0 ? std::log(conditional)
                            : std::log(epsilon > 0.0
                                           ? epsilon
                                           : std::numeric_limits<double>::min());
    }
  }
  return probe;
}

double ClosedFormProbe::log_prob(int32_t code, int32_t label) const {
  if (label < 0 || static_cast<size_t>(label) >= n_labels_)
    throw std::out_of_range("ClosedFormProbe::log_prob: unknown label");
  if (!seen(code)) return std::log(1.0 / static_cast<double>(n_labels_));
  return weights_[static_cast<size_t>(label) * n_codes_ +
                  static_cast<size_t>(code)];
}

int32_t ClosedFormProbe::predict(int32_t code) const {
  if (!seen(code)) return 0;  // uniform fallback, first-index tie-break
  size_t best = 0;
  for (size_t y = 1; y < n_labels_; ++y) {
    if (weights_[y * n_codes_ + code] > weights_[best * n_codes_ + code])
      best = y;
  }
  return static_cast<int32_t>(best);
}

std::string ClosedFormProbe::to_json() const {
  nlohmann::json j;
  j["format"] = "codeprobe-closed-form-probe";
  j["version"] = 1;
  j["n_codes"] = n_codes_;
  j["n_labels"] = n_labels_;
  j["weights"] = weights_;
  j["seen"] = seen_;
  return j.dump();
}

ClosedFormProbe ClosedFormProbe::from_json(const std::string &text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "codeprobe-closed-form-probe" ||
      j.value("version", 0) != 1)
    throw ParseError("probe file: unrecognized format or version");
  ClosedFormProbe probe;
  probe.n_codes_ = j.at("n_codes").get<size_t>();
  probe.n_labels_ = j.at("n_labels").get<size_t>();
  probe.weights_ = j.at("weights").get<std::vector<double>>();
  probe.seen_ = j.at("seen").get<std::vector<uint8_t>>();
  if (probe.weights_.size() != probe.n_codes_ * probe.n_labels_ ||
      probe.seen_.size() != probe.n_codes_)
    throw ParseError("probe file: inconsistent dimensions");
  return probe;
}

namespace {

struct SufficientStats {
  size_t n_codes = 0;
  size_t n_labels = 0;
  std::vector<double> joint;     // n_codes x n_labels
  std::vector<double> per_code;  // n_codes
  double total = 0.0;
};

SufficientStats frame_stats(std::span<const FramePair> frames, size_t n_codes,
                            size_t n_labels) {
  if (frames.empty())
    throw std::invalid_argument("train_logistic: empty training data");
  SufficientStats stats;
  stats.n_codes = n_codes;
  stats.n_labels = n_labels;
  for (const FramePair &frame : frames) {
    if (frame.code < 0 || frame.label < 0)
      throw std::invalid_argument("train_logistic: negative code or label");
    stats.n_codes = std::max(stats.n_codes, static_cast<size_t>(frame.code) + 1);
    stats.n_labels = std::max(stats.n_labels, static_cast<size_t>(frame.label) + 1);
  }
  stats.joint.assign(stats.n_codes * stats.n_labels, 0.0);
  stats.per_code.assign(stats.n_codes, 0.0);
  for (const FramePair &frame : frames) {
    stats.joint[static_cast<size_t>(frame.code) * stats.n_labels +
                static_cast<size_t>(frame.label)] += 1.0;
    stats.per_code[static_cast<size_t>(frame.code)] += 1.0;
  }
  stats.total = static_cast<double>(frames.size());
  return stats;
}

}  // namespace

TrainedProbe train_logistic(std::span<const FramePair> frames,
                            const TrainerConfig &config, size_t n_codes,
                            size_t n_labels) {
  const SufficientStats stats = frame_stats(frames, n_codes, n_labels);

  size_t distinct_labels = 0;
  for (size_t y = 0; y < stats.n_labels; ++y) {
    double column = 0.0;
    for (size_t x = 0; x < stats.n_codes; ++x)
      column += stats.joint[x * stats.n_labels + y];
    if (column > 0.0) ++distinct_labels;
  }
  if (distinct_labels < 2)
    throw std::invalid_argument(
        "train_logistic: degenerate labels (need at least 2 distinct)");

  TrainedProbe probe;
  probe.n_inputs_ = stats.n_codes;
  probe.n_labels_ = stats.n_labels;
  probe.weights_.assign(stats.n_codes * stats.n_labels, 0.0);
  probe.bias_.assign(stats.n_labels, 0.0);  // bias-free model: softmax renormalizes
  probe.seen_.assign(stats.n_codes, 0);
  size_t active = 0;
  for (size_t x = 0; x < stats.n_codes; ++x) {
    probe.seen_[x] = stats.per_code[x] > 0.0 ? 1 : 0;
    if (probe.seen_[x]) ++active;
  }

  // One-hot inputs make the objective separable per code column, so descend
  // the per-code conditional cross-entropy sum (plus L2). Plain frame-mean
  // gradients shrink each column's step by its code frequency (~1/K), which
  // cannot converge within the configured epoch budget for large codebooks.
  const size_t L = stats.n_labels;
  std::vector<double> logits(L);
  std::vector<double> grad(L);
  probe.epoch_losses_.reserve(static_cast<size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0.0;
    double l2_term = 0.0;
    for (size_t x = 0; x < stats.n_codes; ++x) {
      if (stats.per_code[x] == 0.0) continue;
      for (size_t y = 0; y < L; ++y)
        logits[y] = probe.weights_[y * stats.n_codes + x];
      const double lse = log_sum_exp(logits);
      for (size_t y = 0; y < L; ++y) {
        const double p = std::exp(logits[y] - lse);
        const double q = stats.joint[x * L + y] / stats.per_code[x];
        grad[y] = (p - q) + config.l2 * probe.weights_[y * stats.n_codes + x];
        if (q > 0.0) loss -= q * (logits[y] - lse);
        l2_term += probe.weights_[y * stats.n_codes + x] *
                   probe.weights_[y * stats.n_codes + x];
      }
      // Columns are independent, so the in-place update equals a full-batch
      // step on the summed objective.
      for (size_t y = 0; y < L; ++y)
        probe.weights_[y * stats.n_codes + x] -= config.learning_rate * grad[y];
    }
    probe.epoch_losses_.push_back(
        (loss + 0.5 * config.l2 * l2_term) / static_cast<double>(active));
  }
  return probe;
}

TrainedProbe train_logistic_dense(std::span<const std::vector<double>> features,
                                  std::span<const int32_t> labels,
                                  const TrainerConfig &config, size_t n_labels) {
  if (features.empty() || features.size() != labels.size())
    throw std::invalid_argument("train_logistic_dense: bad training data");
  const size_t dim = features.front().size();
  for (const auto &row : features)
    if (row.size() != dim)
      throw std::invalid_argument("train_logistic_dense: ragged features");
  size_t L = n_labels;
  std::unordered_set<int32_t> distinct;
  for (int32_t label : labels) {
    if (label < 0)
      throw std::invalid_argument("train_logistic_dense: negative label");
    L = std::max(L, static_cast<size_t>(label) + 1);
    distinct.insert(label);
  }
  if (distinct.size() < 2)
    throw std::invalid_argument(
        "train_logistic_dense: degenerate labels (need at least 2 distinct)");

  TrainedProbe probe;
  probe.n_inputs_ = dim;
  probe.n_labels_ = L;
  probe.weights_.assign(L * dim, 0.0);
  probe.bias_.assign(L, 0.0);

  const double n = static_cast<double>(features.size());
  std::vector<double> grad_w(L * dim);
  std::vector<double> grad_b(L);
  std::vector<double> logits(L);
  probe.epoch_losses_.reserve(static_cast<size_t>(config.epochs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    std::fill(grad_b.begin(), grad_b.end(), 0.0);
    double loss = 0.0;
    for (size_t i = 0; i < features.size(); ++i) {
      const std::vector<double> &f = features[i];
      for (size_t y = 0; y < L; ++y) {
        double dot = probe.bias_[y];
        const double *w = probe.weights_.data() + y * dim;
        for (size_t d = 0; d < dim; ++d) dot += w[d] * f[d];
        logits[y] = dot;
      }
      const double lse = log_sum_exp(logits);
      const auto target = static_cast<size_t>(labels[i]);
      loss -= logits[target] - lse;
      for (size_t y = 0; y < L; ++y) {
        const double err = std::exp(logits[y] - lse) - (y == target ? 1.0 : 0.0);
        double *gw = grad_w.data() + y * dim;
        for (size_t d = 0; d < dim; ++d) gw[d] += err * f[d];
        grad_b[y] += err;
      }
    }
    loss /= n;
    double l2_term = 0.0;
    for (size_t i = 0; i < probe.weights_.size(); ++i) {
      grad_w[i] = grad_w[i] / n + config.l2 * probe.weights_[i];
      l2_term += probe.weights_[i] * probe.weights_[i];
    }
    probe.epoch_losses_.push_back(loss + 0.5 * config.l2 * l2_term);
    for (size_t i = 0; i < probe.weights_.size(); ++i)
      probe.weights_[i] -= config.learning_rate * grad_w[i];
    for (size_t y = 0; y < L; ++y)
      probe.bias_[y] -= config.learning_rate * grad_b[y] / n;
  }
  return probe;
}

std::vector<double> TrainedProbe::logits(int32_t code) const {
  std::vector<double> out(n_labels_);
  for (size_t y = 0; y < n_labels_; ++y)
    out[y] = weights_[y * n_inputs_ + static_cast<size_t>(code)] + bias_[y];
  return out;
}

double TrainedProbe::log_prob(int32_t code, int32_t label) const {
  if (label < 0 || static_cast<size_t>(label) >= n_labels_)
    throw std::out_of_range("TrainedProbe::log_prob: unknown label");
  const bool unseen = code < 0 || static_cast<size_t>(code) >= n_inputs_ ||
                      (!seen_.empty() && !seen_[static_cast<size_t>(code)]);
  if (unseen) return std::log(1.0 / static_cast<double>(n_labels_));
  const auto l = logits(code);
  return l[static_cast<size_t>(label)] - log_sum_exp(l);
}

int32_t TrainedProbe::predict(int32_t code) const {
  const bool unseen = code < 0 || static_cast<size_t>(code) >= n_inputs_ ||
                      (!seen_.empty() && !seen_[static_cast<size_t>(code)]);
  if (unseen) return 0;
  const auto l = logits(code);
  return static_cast<int32_t>(argmax_first(l));
}

int32_t TrainedProbe::predict_dense(std::span<const double> features) const {
  if (features.size() != n_inputs_)
    throw std::invalid_argument("predict_dense: feature dimension mismatch");
  std::vector<double> l(n_labels_);
  for (size_t y = 0; y < n_labels_; ++y) {
    double dot = bias_[y];
    const double *w = weights_.data() + y * n_inputs_;
    for (size_t d = 0; d < n_inputs_; ++d) dot += w[d] * features[d];
    l[y] = dot;
  }
  return static_cast<int32_t>(argmax_first(l));
}

std::string TrainedProbe::to_json() const {
  nlohmann::json j;
  j["format"] = "codeprobe-probe";
  j["version"] = 1;
  j["n_inputs"] = n_inputs_;
  j["n_labels"] = n_labels_;
  j["weights"] = weights_;
  j["bias"] = bias_;
  j["seen"] = seen_;
  return j.dump();
}

TrainedProbe TrainedProbe::from_json(const std::string &text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "codeprobe-probe" || j.value("version", 0) != 1)
    throw ParseError("probe file: unrecognized format or version");
  TrainedProbe probe;
  probe.n_inputs_ = j.at("n_inputs").get<size_t>();
  probe.n_labels_ = j.at("n_labels").get<size_t>();
  probe.weights_ = j.at("weights").get<std::vector<double>>();
  probe.bias_ = j.at("bias").get<std::vector<double>>();
  probe.seen_ = j.at("seen").get<std::vector<uint8_t>>();
  if (probe.weights_.size() != probe.n_inputs_ * probe.n_labels_ ||
      probe.bias_.size() != probe.n_labels_)
    throw ParseError("probe file: inconsistent dimensions");
  return probe;
}

namespace {

template <typename Probe>
double cross_entropy_impl(const Probe &probe, std::span<const FramePair> frames) {
  if (frames.empty())
    throw std::invalid_argument("cross_entropy: empty frame list");
  double sum = 0.0;
  for (const FramePair &frame : frames)
    sum -= probe.log_prob(frame.code, frame.label);
  return sum / static_cast<double>(frames.size());
}

template <typename Probe>
double accuracy_impl(const Probe &probe, std::span<const FramePair> frames) {
  if (frames.empty()) throw std::invalid_argument("accuracy: empty frame list");
  size_t correct = 0;
  for (const FramePair &frame : frames)
    if (probe.predict(frame.code) == frame.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(frames.size());
}

}  // namespace

double cross_entropy(const ClosedFormProbe &probe,
                     std::span<const FramePair> frames) {
  return cross_entropy_impl(probe, frames);
}

double cross_entropy(const TrainedProbe &probe,
                     std::span<const FramePair> frames) {
  return cross_entropy_impl(probe, frames);
}

double accuracy(const ClosedFormProbe &probe, std::span<const FramePair> frames) {
  return accuracy_impl(probe, frames);
}

double accuracy(const TrainedProbe &probe, std::span<const FramePair> frames) {
  return accuracy_impl(probe, frames);
}

std::vector<double> code_frequency_vector(const CodeSequence &sequence) {
  if (sequence.codebook_size <= 0)
    throw std::invalid_argument("code_frequency_vector: missing codebook size");
  std::vector<double> freq(static_cast<size_t>(sequence.codebook_size), 0.0);
  for (int32_t code : sequence.codes) freq[static_cast<size_t>(code)] += 1.0;
  const auto n = static_cast<double>(sequence.codes.size());
  for (double &f : freq) f /= n;
  return freq;
}

double speaker_probe(std::span<const CodeSequence> corpus, uint64_t split_seed,
                     const TrainerConfig &config) {
  std::unordered_set<std::string> speakers;
  for (const CodeSequence &seq : corpus) speakers.insert(seq.speaker_id);
  if (speakers.size() < 2)
    throw std::invalid_argument("speaker_probe: need at least 2 speakers");

  auto [train, eval] = split_halves(corpus, split_seed);
  LabelInterner speaker_ids;
  auto half_speakers = [](std::span<const CodeSequence> half) {
    std::unordered_set<std::string> s;
    for (const CodeSequence &seq : half) s.insert(seq.speaker_id);
    return s;
  };
  const auto train_speakers = half_speakers(train);
  const auto eval_speakers = half_speakers(eval);
  for (const std::string &speaker : speakers) {
    if (!train_speakers.count(speaker) || !eval_speakers.count(speaker))
      throw std::invalid_argument(
          "speaker_probe: speaker \"" + speaker +
          "\" absent from one half; use a stratified split (more utterances "
          "per speaker or a different split seed)");
  }

  std::vector<std::vector<double>> train_features;
  std::vector<int32_t> train_labels;
  train_features.reserve(train.size());
  for (const CodeSequence &seq : train) {
    train_features.push_back(code_frequency_vector(seq));
    train_labels.push_back(speaker_ids.id(seq.speaker_id));
  }
  const TrainedProbe probe = train_logistic_dense(
      train_features, train_labels, config, speakers.size());

  size_t correct = 0;
  for (const CodeSequence &seq : eval) {
    const auto features = code_frequency_vector(seq);
    if (probe.predict_dense(features) == speaker_ids.id(seq.speaker_id))
      ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval.size());
}

}  // namespace codeprobe
