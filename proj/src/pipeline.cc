// codeprobe/pipeline.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/pipeline.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codeprobe {

namespace {

std::string with_prefix(const std::string &prefix, const std::string &extra) {
  if (prefix.empty()) return extra.empty() ? "-" : extra;
  if (extra.empty()) return prefix;
  return prefix + ";" + extra;
}

}  // namespace

FrameData collect_frames(std::span<const AlignedUtterance> train_half,
                         std::span<const AlignedUtterance> eval_half,
                         LabelInterner &labels, const EvalOptions &options) {
  FrameData frames;
  auto collect = [&labels, &options](std::span<const AlignedUtterance> half,
                                     std::vector<FramePair> &out) {
    for (const AlignedUtterance &utterance : half) {
      const auto frame_label_list =
          frame_labels(utterance, options.silence_label);
      for (size_t t = 0; t < frame_label_list.size(); ++t) {
        if (!options.keep_silence &&
            frame_label_list[t] == options.silence_label)
          continue;
        out.push_back({utterance.codes.codes[t], labels.id(frame_label_list[t])});
      }
    }
  };
  collect(train_half, frames.train);
  collect(eval_half, frames.eval);
  return frames;
}

RsaStimuli complete_stimuli(std::span<const AlignedUtterance> half,
                            LabelInterner &labels,
                            const std::string &silence_label) {
  RsaStimuli stimuli;
  for (const AlignedUtterance &utterance : half) {
    SymbolString reference;
    for (const PhonemeInterval &interval : utterance.intervals) {
      if (interval.label == silence_label) continue;
      reference.push_back(labels.id(interval.label));
    }
    if (reference.empty()) {
      ++stimuli.dropped;
      continue;
    }
    stimuli.codes.push_back(utterance.codes.codes);
    stimuli.references.push_back(std::move(reference));
  }
  return stimuli;
}

RsaStimuli triplet_stimuli(std::span<const Segment> segments,
                           LabelInterner &labels) {
  RsaStimuli stimuli;
  for (const Segment &segment : segments) {
    stimuli.codes.push_back(segment.code_slice);
    stimuli.references.push_back({labels.id(segment.trigram[0]),
                                  labels.id(segment.trigram[1]),
                                  labels.id(segment.trigram[2])});
  }
  return stimuli;
}

EvalResult evaluate_corpus(std::span<const AlignedUtterance> corpus,
                           const EvalOptions &options,
                           const TripleSet *external_triples) {
  if (corpus.empty()) throw std::invalid_argument("evaluate_corpus: empty corpus");
  EvalResult result;

  const auto [train_half, eval_half] =
      split_halves(corpus, derive_seed(options.seed, "split"));
  const auto codebook_size =
      static_cast<size_t>(corpus.front().codes.codebook_size);

  LabelInterner labels;
  if (options.metric_nmi || options.metric_dc) {
    const FrameData frames =
        collect_frames(train_half, eval_half, labels, options);
    if (frames.eval.empty())
      throw std::runtime_error(
          "evaluate_corpus: no labeled evaluation frames (all silence?)");

    std::vector<int32_t> eval_codes, eval_labels;
    eval_codes.reserve(frames.eval.size());
    eval_labels.reserve(frames.eval.size());
    for (const FramePair &frame : frames.eval) {
      eval_codes.push_back(frame.code);
      eval_labels.push_back(frame.label);
    }
    const JointHistogram hist =
        build_histogram(eval_codes, eval_labels, codebook_size, labels.size());

    if (options.metric_nmi) {
      result.nmi = nmi(hist);
      result.rows.push_back({"nmi", "frames",
                             with_prefix(options.config_prefix, ""),
                             options.seed, hist.total, result.nmi});
    }
    if (options.metric_dc) {
      if (frames.train.empty())
        throw std::runtime_error("evaluate_corpus: no labeled training frames");
      const TrainedProbe probe = train_logistic(
          frames.train, options.trainer, codebook_size, labels.size());
      result.dc_accuracy = accuracy(probe, frames.eval);
      result.dc_cross_entropy = cross_entropy(probe, frames.eval);
      result.rows.push_back({"dc_accuracy", "frames",
                             with_prefix(options.config_prefix, ""),
                             options.seed, frames.eval.size(),
                             result.dc_accuracy});
      result.rows.push_back({"dc_cross_entropy", "frames",
                             with_prefix(options.config_prefix, ""),
                             options.seed, frames.eval.size(),
                             result.dc_cross_entropy});
      result.probe = probe;
    }
  }

  if (options.metric_rsa) {
    const RsaStimuli stimuli =
        complete_stimuli(eval_half, labels, options.silence_label);
    if (stimuli.dropped > 0)
      log_warn("rsa: dropped " + std::to_string(stimuli.dropped) +
               " utterance(s) with no non-silence reference");
    const PairSampler sampler{options.pair_budget,
                              derive_seed(options.seed, "pairs")};
    const RsaResult rsa =
        rsa_on_strings(stimuli.codes, stimuli.references, sampler,
                       options.correlation, StimulusKind::kComplete,
                       options.jobs);
    result.rsa_complete = rsa.correlation;
    result.rows.push_back(
        {std::string("rsa_") + to_string(rsa.correlation_kind), "complete",
         with_prefix(options.config_prefix, ""), options.seed, rsa.n_pairs,
         rsa.correlation});
  }

  if (options.metric_abx) {
    TripleSet local;
    const TripleSet *triples = external_triples;
    if (triples == nullptr) {
      const auto segments = extract_segments(eval_half, options.silence_label);
      local = build_triples(segments, options.max_per_contrast,
                            derive_seed(options.seed, "triples"),
                            options.within_speaker);
      triples = &local;
    }
    const AbxScore score = abx_score(*triples, options.jobs);
    const std::string config =
        with_prefix(options.config_prefix, "abx_input=" + options.abx_input);
    result.abx_accuracy = score.accuracy;
    result.rows.push_back({"abx_accuracy", "triplet", config, options.seed,
                           score.n_triples, score.accuracy});
    result.rows.push_back({"abx_error_macro", "triplet", config, options.seed,
                           score.n_triples, score.macro_error});
    result.rows.push_back({"abx_error_micro", "triplet", config, options.seed,
                           score.n_triples, score.micro_error});
    result.rows.push_back({"abx_contrasts", "triplet", config, options.seed,
                           score.n_triples,
                           static_cast<double>(score.n_contrasts)});
  }

  return result;
}

namespace {

struct SweepCell {
  int codebook = 0;
  double purity = 0.0;
  int seed_index = 0;
  uint64_t generation_seed = 0;
  double x = 0.0;  // plotting coordinate: log2 K or purity
};

ChannelConfig cell_channel(const SweepOptions &options, const SweepCell &cell) {
  ChannelConfig config;
  config.codebook_size = cell.codebook;
  config.n_phonemes = options.phonemes;
  config.n_speakers = options.speakers;
  config.n_utterances = options.utterances;
  config.purity = cell.purity;
  config.speaker_leakage = 0.0;
  config.frames_per_phoneme = options.frames_per_phoneme;
  config.utterance_length = options.utterance_length;
  config.seed = cell.generation_seed;
  return config;
}

std::string cell_config_string(const SweepOptions &options,
                               const SweepCell &cell) {
  return "recipe=" + options.recipe + ";K=" + std::to_string(cell.codebook) +
         ";alpha=" + format_double(cell.purity) +
         ";gen=" + std::to_string(cell.seed_index);
}

// Distance-distribution shape rows (skew and excess kurtosis of the code
// side of a DistancePairs sample).
void shape_rows(const std::string &metric_prefix, const std::string &kind,
                const std::string &config, uint64_t seed,
                std::span<const double> distances,
                std::vector<MetricRow> &rows) {
  rows.push_back({metric_prefix + "_skew", kind, config, seed,
                  distances.size(), skewness(distances)});
  rows.push_back({metric_prefix + "_kurtosis", kind, config, seed,
                  distances.size(), excess_kurtosis(distances)});
}

}  // namespace

SweepOutput run_sweep(const SweepOptions &options) {
  const bool by_codebook =
      options.recipe == "codebook" || options.recipe == "stimulus";
  const bool stimulus = options.recipe == "stimulus";
  if (!by_codebook && options.recipe != "purity")
    throw std::invalid_argument("run_sweep: unknown recipe \"" +
                                options.recipe + "\"");

  std::vector<SweepCell> cells;
  if (by_codebook) {
    for (int k : options.codebook_grid)
      for (int s = 0; s < options.seeds_per_cell; ++s)
        cells.push_back({k, options.purity, s, 0, std::log2(static_cast<double>(k))});
  } else {
    for (double alpha : options.purity_grid)
      for (int s = 0; s < options.seeds_per_cell; ++s)
        cells.push_back({options.codebook, alpha, s, 0, alpha});
  }
  for (SweepCell &cell : cells) {
    cell.generation_seed = derive_seed(
        options.seed, "cell:" + std::to_string(cell.codebook) + ":" +
                          format_double(cell.purity) + ":" +
                          std::to_string(cell.seed_index));
  }

  // Shape rows only at the extreme codebook sizes of the stimulus recipe.
  auto wants_shape = [&options, stimulus](const SweepCell &cell) {
    if (!stimulus) return false;
    const auto [min_k, max_k] = std::minmax_element(
        options.codebook_grid.begin(), options.codebook_grid.end());
    return cell.codebook == *min_k || cell.codebook == *max_k;
  };

  std::vector<std::vector<MetricRow>> cell_rows(cells.size());
  std::vector<std::map<std::string, double>> cell_values(cells.size());

  parallel_for(cells.size(), options.jobs, [&](size_t begin, size_t end) {
    for (size_t c = begin; c < end; ++c) {
      const SweepCell &cell = cells[c];
      const std::string config = cell_config_string(options, cell);
      const SynthCorpus corpus = generate(cell_channel(options, cell));

      EvalOptions eval;
      eval.seed = cell.generation_seed;
      eval.correlation = options.correlation;
      eval.pair_budget = options.pair_budget;
      eval.max_per_contrast = options.max_per_contrast;
      eval.trainer = options.trainer;
      eval.jobs = 1;  // cells already run in parallel
      eval.config_prefix = config;

      auto &rows = cell_rows[c];
      auto &values = cell_values[c];

      if (stimulus) {
        // ABX, RSA on complete utterances and on the very same trigram
        // segments, plus distance-distribution shape at the grid extremes.
        const auto [train_half, eval_half] =
            split_halves(std::span<const AlignedUtterance>(corpus.utterances),
                         derive_seed(eval.seed, "split"));
        (void)train_half;
        LabelInterner labels;

        const auto segments = extract_segments(eval_half, eval.silence_label);
        const TripleSet triples =
            build_triples(segments, eval.max_per_contrast,
                          derive_seed(eval.seed, "triples"));
        const AbxScore score = abx_score(triples);
        rows.push_back({"abx_accuracy", "triplet", config, cell.generation_seed,
                        score.n_triples, score.accuracy});
        values["abx_accuracy"] = score.accuracy;

        const PairSampler sampler{eval.pair_budget,
                                  derive_seed(eval.seed, "pairs")};
        auto score_stimuli = [&](const RsaStimuli &stimuli, StimulusKind kind,
                                 const char *metric) {
          std::vector<SymbolString> collapsed;
          collapsed.reserve(stimuli.codes.size());
          for (const SymbolString &s : stimuli.codes)
            collapsed.push_back(collapse_repeats(s));
          const DistancePairs pairs =
              pairwise_distances(collapsed, stimuli.references, sampler);
          RsaResult rsa = rsa_score(pairs, eval.correlation);
          rsa.input_kind = kind;
          rows.push_back({metric, to_string(kind), config,
                          cell.generation_seed, rsa.n_pairs, rsa.correlation});
          values[metric] = rsa.correlation;
          if (wants_shape(cells[c]))
            shape_rows("distance", to_string(kind), config,
                       cell.generation_seed, pairs.distances_a, rows);
        };
        score_stimuli(complete_stimuli(eval_half, labels, eval.silence_label),
                      StimulusKind::kComplete, "rsa_complete");
        score_stimuli(triplet_stimuli(segments, labels),
                      StimulusKind::kTriplet, "rsa_triplet");
      } else {
        const EvalResult result = evaluate_corpus(corpus.utterances, eval);
        rows = result.rows;
        values["nmi"] = result.nmi;
        values["dc_accuracy"] = result.dc_accuracy;
        values["rsa"] = result.rsa_complete;
        values["abx_accuracy"] = result.abx_accuracy;
      }
    }
  });

  SweepOutput out;
  for (size_t c = 0; c < cells.size(); ++c)
    out.rows.insert(out.rows.end(), cell_rows[c].begin(), cell_rows[c].end());

  // Scatter series per metric for LOESS rows and plotting.
  for (size_t c = 0; c < cells.size(); ++c) {
    for (const auto &[metric, value] : cell_values[c]) {
      if (std::isnan(value)) continue;
      out.series[metric].push_back(
          {cells[c].x, value, "gen" + std::to_string(cells[c].seed_index)});
    }
  }

  const std::string summary_config = "recipe=" + options.recipe + ";summary";
  for (const auto &[metric, series] : out.series) {
    std::vector<std::pair<double, double>> points;
    points.reserve(series.size());
    for (const MetricPoint &p : series) points.emplace_back(p.x, p.y);
    for (const auto &[x, fitted] : loess(points, options.loess_span)) {
      out.rows.push_back({"loess_" + metric, "-",
                          summary_config + ";x=" + format_double(x),
                          options.seed, series.size(), fitted});
    }
  }

  // Correlation summaries across matched cells.
  auto matched = [&](const std::string &a, const std::string &b,
                     std::vector<double> &xs, std::vector<double> &ys) {
    xs.clear();
    ys.clear();
    for (const auto &values : cell_values) {
      auto ia = values.find(a);
      auto ib = values.find(b);
      if (ia == values.end() || ib == values.end()) continue;
      if (std::isnan(ia->second) || std::isnan(ib->second)) continue;
      xs.push_back(ia->second);
      ys.push_back(ib->second);
    }
  };
  const std::vector<std::pair<std::string, std::string>> wanted =
      stimulus ? std::vector<std::pair<std::string, std::string>>{
                     {"abx_accuracy", "rsa_triplet"},
                     {"abx_accuracy", "rsa_complete"}}
               : std::vector<std::pair<std::string, std::string>>{
                     {"dc_accuracy", "nmi"},
                     {"abx_accuracy", "rsa"},
                     {"nmi", "rsa"},
                     {"dc_accuracy", "abx_accuracy"}};
  std::vector<double> xs, ys;
  for (const auto &[a, b] : wanted) {
    matched(a, b, xs, ys);
    if (xs.size() < 3) continue;
    out.rows.push_back(
        {"corr_" + a + "_" + b, std::string(to_string(options.correlation)),
         summary_config, options.seed, xs.size(),
         metric_correlation(xs, ys, options.correlation)});
  }
  return out;
}

}  // namespace codeprobe
