// tests/test_pipeline.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "codeprobe/pipeline.h"
#include "doctest.h"

using namespace codeprobe;

namespace {

SynthCorpus perfect_corpus(uint64_t seed) {
  ChannelConfig config;
  config.codebook_size = 4;
  config.n_phonemes = 4;
  config.n_speakers = 3;
  config.n_utterances = 60;
  config.purity = 1.0;
  config.speaker_leakage = 0.0;
  config.utterance_length = {6, 12};
  config.frames_per_phoneme = {2, 4};
  config.seed = seed;
  return generate(config);
}

double row_value(const std::vector<MetricRow> &rows, const std::string &metric) {
  for (const MetricRow &row : rows)
    if (row.metric == metric) return row.value;
  FAIL("missing metric row: " << metric);
  return std::nan("");
}

}  // namespace

TEST_CASE("a perfect channel scores 1.0 on all four metrics") {
  const SynthCorpus corpus = perfect_corpus(3);
  EvalOptions options;
  options.seed = 17;
  options.max_per_contrast = 50;
  options.trainer.epochs = 150;
  const EvalResult result = evaluate_corpus(corpus.utterances, options);

  CHECK(row_value(result.rows, "nmi") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(row_value(result.rows, "dc_accuracy") == 1.0);
  CHECK(row_value(result.rows, "rsa_pearson") ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(row_value(result.rows, "abx_accuracy") == 1.0);
  CHECK(row_value(result.rows, "abx_error_macro") == 0.0);
}

TEST_CASE("a random-code corpus sits at chance everywhere") {
  ChannelConfig config;
  config.codebook_size = 16;
  config.n_phonemes = 4;
  config.n_speakers = 3;
  config.n_utterances = 200;
  config.purity = 0.0;
  config.utterance_length = {8, 16};
  config.frames_per_phoneme = {2, 4};
  config.seed = 5;
  const SynthCorpus corpus = generate(config);

  EvalOptions options;
  options.seed = 23;
  options.max_per_contrast = 40;
  options.trainer.epochs = 60;
  const EvalResult result = evaluate_corpus(corpus.utterances, options);
  CHECK(row_value(result.rows, "nmi") < 0.05);
  CHECK(std::abs(row_value(result.rows, "rsa_pearson")) < 0.1);
  CHECK(std::abs(row_value(result.rows, "abx_accuracy") - 0.5) < 0.06);
}

TEST_CASE("evaluate_corpus is reproducible row for row") {
  const SynthCorpus corpus = perfect_corpus(9);
  EvalOptions options;
  options.seed = 31;
  options.max_per_contrast = 20;
  const EvalResult a = evaluate_corpus(corpus.utterances, options);
  const EvalResult b = evaluate_corpus(corpus.utterances, options);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].metric == b.rows[i].metric);
    CHECK(a.rows[i].value == b.rows[i].value);
    CHECK(a.rows[i].n == b.rows[i].n);
  }
}

TEST_CASE("jobs do not change evaluation output") {
  ChannelConfig config;
  config.codebook_size = 12;
  config.n_phonemes = 6;
  config.n_speakers = 3;
  config.n_utterances = 120;
  config.purity = 0.6;
  config.seed = 77;
  const SynthCorpus corpus = generate(config);
  EvalOptions options;
  options.seed = 7;
  options.max_per_contrast = 30;
  options.trainer.epochs = 50;
  options.jobs = 1;
  const EvalResult seq = evaluate_corpus(corpus.utterances, options);
  options.jobs = 3;
  const EvalResult par = evaluate_corpus(corpus.utterances, options);
  REQUIRE(seq.rows.size() == par.rows.size());
  for (size_t i = 0; i < seq.rows.size(); ++i)
    CHECK(seq.rows[i].value == par.rows[i].value);
}

TEST_CASE("silence frames are excluded by default and kept on request") {
  AlignedUtterance utterance;
  utterance.codes.utterance_id = "u0";
  utterance.codes.speaker_id = "s0";
  utterance.codes.codebook_size = 4;
  utterance.codes.codes = {0, 0, 1, 1, 2, 2};
  utterance.intervals = {{"a", 0, 2}, {"b", 2, 4}};  // frames 4-5 are silence

  LabelInterner labels;
  EvalOptions options;
  const FrameData excluded = collect_frames({&utterance, 1}, {&utterance, 1},
                                            labels, options);
  CHECK(excluded.eval.size() == 4);

  LabelInterner labels_keep;
  EvalOptions keep;
  keep.keep_silence = true;
  const FrameData kept = collect_frames({&utterance, 1}, {&utterance, 1},
                                        labels_keep, keep);
  CHECK(kept.eval.size() == 6);
  CHECK(labels_keep.find("SIL") >= 0);
}

TEST_CASE("external triples override segment extraction") {
  const SynthCorpus corpus = perfect_corpus(21);
  const auto segments = extract_segments(corpus.utterances);
  const TripleSet triples = build_triples(segments, 10, 3);

  EvalOptions options;
  options.seed = 41;
  options.metric_nmi = options.metric_dc = options.metric_rsa = false;
  const EvalResult result =
      evaluate_corpus(corpus.utterances, options, &triples);
  REQUIRE(result.rows.size() == 4);
  CHECK(result.rows[0].metric == "abx_accuracy");
  CHECK(result.rows[0].n == triples.size());
}

TEST_CASE("codebook sweep emits the full matrix of cell rows") {
  SweepOptions options;
  options.recipe = "codebook";
  options.codebook_grid = {8, 16, 32};
  options.seeds_per_cell = 3;
  options.utterances = 60;
  options.phonemes = 8;
  options.speakers = 3;
  options.purity = 0.7;
  options.max_per_contrast = 10;
  options.trainer.epochs = 40;
  options.seed = 101;
  const SweepOutput output = run_sweep(options);

  // 3 K-values x 3 seeds x the 4 headline metrics.
  std::map<std::string, std::set<std::string>> cells_by_metric;
  for (const MetricRow &row : output.rows) {
    if (row.metric == "nmi" || row.metric == "dc_accuracy" ||
        row.metric == "rsa_pearson" || row.metric == "abx_accuracy")
      cells_by_metric[row.metric].insert(row.config);
  }
  for (const char *metric : {"nmi", "dc_accuracy", "rsa_pearson", "abx_accuracy"})
    CHECK(cells_by_metric[metric].size() == 9);

  // LOESS summary rows cover every cell point of each headline metric.
  size_t loess_rows = 0;
  for (const MetricRow &row : output.rows)
    if (row.metric.rfind("loess_", 0) == 0) ++loess_rows;
  CHECK(loess_rows == 4 * 9);

  // Correlation summaries are present.
  size_t corr_rows = 0;
  for (const MetricRow &row : output.rows)
    if (row.metric.rfind("corr_", 0) == 0) ++corr_rows;
  CHECK(corr_rows >= 1);
}

TEST_CASE("purity sweep couples DC accuracy with NMI") {
  SweepOptions options;
  options.recipe = "purity";
  options.purity_grid = {0.0, 0.5, 1.0};
  options.seeds_per_cell = 2;
  options.codebook = 16;
  options.utterances = 80;
  options.phonemes = 8;
  options.speakers = 3;
  options.max_per_contrast = 10;
  options.trainer.epochs = 40;
  options.seed = 11;
  const SweepOutput output = run_sweep(options);

  std::vector<double> nmi_values, dc_values;
  std::map<std::string, double> nmi_by_cell;
  for (const MetricRow &row : output.rows)
    if (row.metric == "nmi") nmi_by_cell[row.config] = row.value;
  for (const MetricRow &row : output.rows) {
    if (row.metric != "dc_accuracy") continue;
    auto it = nmi_by_cell.find(row.config);
    REQUIRE(it != nmi_by_cell.end());
    nmi_values.push_back(it->second);
    dc_values.push_back(row.value);
  }
  REQUIRE(nmi_values.size() == 6);
  CHECK(metric_correlation(dc_values, nmi_values,
                           CorrelationKind::kSpearman) > 0.9);

  bool found = false;
  for (const MetricRow &row : output.rows)
    if (row.metric == "corr_dc_accuracy_nmi") found = true;
  CHECK(found);
}

TEST_CASE("stimulus sweep emits triplet RSA and distribution-shape rows") {
  SweepOptions options;
  options.recipe = "stimulus";
  options.codebook_grid = {8, 64};
  options.seeds_per_cell = 2;
  options.utterances = 80;
  options.phonemes = 6;
  options.speakers = 3;
  options.purity = 0.6;
  options.max_per_contrast = 10;
  options.seed = 13;
  const SweepOutput output = run_sweep(options);

  std::map<std::string, size_t> metric_counts;
  for (const MetricRow &row : output.rows) ++metric_counts[row.metric];
  CHECK(metric_counts["abx_accuracy"] == 4);
  CHECK(metric_counts["rsa_complete"] == 4);
  CHECK(metric_counts["rsa_triplet"] == 4);
  // Shape rows at both grid extremes, for complete and triplet inputs.
  CHECK(metric_counts["distance_skew"] == 8);
  CHECK(metric_counts["distance_kurtosis"] == 8);
  CHECK(metric_counts["corr_abx_accuracy_rsa_triplet"] == 1);
  CHECK(metric_counts["corr_abx_accuracy_rsa_complete"] == 1);

  // input_kind distinguishes the two RSA variants.
  for (const MetricRow &row : output.rows) {
    if (row.metric == "rsa_complete") CHECK(row.input_kind == "complete");
    if (row.metric == "rsa_triplet") CHECK(row.input_kind == "triplet");
  }
}

TEST_CASE("sweep rows are independent of the cell-level job count") {
  SweepOptions options;
  options.recipe = "purity";
  options.purity_grid = {0.2, 0.8};
  options.seeds_per_cell = 2;
  options.codebook = 8;
  options.utterances = 40;
  options.phonemes = 4;
  options.speakers = 2;
  options.max_per_contrast = 8;
  options.trainer.epochs = 30;
  options.seed = 19;

  options.jobs = 1;
  const SweepOutput seq = run_sweep(options);
  options.jobs = 4;
  const SweepOutput par = run_sweep(options);
  REQUIRE(seq.rows.size() == par.rows.size());
  for (size_t i = 0; i < seq.rows.size(); ++i) {
    CHECK(seq.rows[i].metric == par.rows[i].metric);
    CHECK(seq.rows[i].config == par.rows[i].config);
    CHECK(seq.rows[i].value == par.rows[i].value);
  }
}
