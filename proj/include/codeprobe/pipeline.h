// codeprobe/pipeline.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_PIPELINE_H_
#define CODEPROBE_PIPELINE_H_

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codeprobe/abx.h"
#include "codeprobe/corpus.h"
#include "codeprobe/probe.h"
#include "codeprobe/report.h"
#include "codeprobe/rsa.h"
#include "codeprobe/stats.h"
#include "codeprobe/synth.h"

namespace codeprobe {

struct EvalOptions {
  bool metric_nmi = true;
  bool metric_dc = true;
  bool metric_rsa = true;
  bool metric_abx = true;
  uint64_t seed = 0;
  bool keep_silence = false;
  std::string silence_label = kDefaultSilenceLabel;
  CorrelationKind correlation = CorrelationKind::kPearson;
  uint64_t pair_budget = 5'000'000;
  uint64_t max_per_contrast = 500;
  bool within_speaker = false;
  std::string abx_input = "slice";  // report metadata: slice- vs segment-encoded
  unsigned jobs = 1;
  TrainerConfig trainer;
  std::string config_prefix;  // prepended to every row's config column
};

struct EvalResult {
  std::vector<MetricRow> rows;
  double nmi = std::nan("");
  double dc_accuracy = std::nan("");
  double dc_cross_entropy = std::nan("");
  double rsa_complete = std::nan("");
  double abx_accuracy = std::nan("");
  // The trained diagnostic classifier, for optional serialization.
  std::optional<TrainedProbe> probe;
};

// Frame-wise (code, label) pairs for the two halves, silence filtered per
// options. The interner accumulates labels in first-appearance order.
struct FrameData {
  std::vector<FramePair> train;
  std::vector<FramePair> eval;
};
FrameData collect_frames(std::span<const AlignedUtterance> train_half,
                         std::span<const AlignedUtterance> eval_half,
                         LabelInterner &labels, const EvalOptions &options);

// Full-utterance stimuli: per utterance the code string plus the interned
// non-silence phoneme reference string. Utterances with an empty reference
// are dropped (and counted).
struct RsaStimuli {
  std::vector<SymbolString> codes;
  std::vector<SymbolString> references;
  size_t dropped = 0;
};
RsaStimuli complete_stimuli(std::span<const AlignedUtterance> half,
                            LabelInterner &labels,
                            const std::string &silence_label);
RsaStimuli triplet_stimuli(std::span<const Segment> segments,
                           LabelInterner &labels);

// The half-split four-metric evaluation shared by `eval` and `sweep`:
// train the diagnostic classifier on one half, score everything on the
// other. When external_triples is given, ABX scores those instead of
// extracting segments from the evaluation half.
EvalResult evaluate_corpus(std::span<const AlignedUtterance> corpus,
                           const EvalOptions &options,
                           const TripleSet *external_triples = nullptr);

struct SweepOptions {
  std::string recipe = "codebook";  // codebook | purity | stimulus
  uint64_t seed = 0;
  int seeds_per_cell = 3;
  unsigned jobs = 1;
  // Corpus shape per cell.
  int utterances = 240;
  int phonemes = 12;
  int speakers = 8;
  std::pair<int32_t, int32_t> frames_per_phoneme = {2, 8};
  std::pair<int32_t, int32_t> utterance_length = {8, 30};
  // Fixed factors (the recipe varies the other one).
  double purity = 0.6;
  int codebook = 64;
  std::vector<int> codebook_grid = {32, 64, 128, 256, 512, 1024};
  std::vector<double> purity_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  uint64_t pair_budget = 5'000'000;
  uint64_t max_per_contrast = 50;
  double loess_span = 0.75;
  CorrelationKind correlation = CorrelationKind::kPearson;
  TrainerConfig trainer;
};

struct SweepOutput {
  std::vector<MetricRow> rows;
  // metric name -> scatter points (x = log2 K or purity) for plotting.
  std::map<std::string, MetricSeries> series;
};

SweepOutput run_sweep(const SweepOptions &options);

}  // namespace codeprobe

#endif  // CODEPROBE_PIPELINE_H_
