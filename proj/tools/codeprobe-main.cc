// tools/codeprobe-main.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codeprobe/abx.h"
#include "codeprobe/corpus.h"
#include "codeprobe/pipeline.h"
#include "codeprobe/plot.h"
#include "codeprobe/quantize.h"
#include "codeprobe/report.h"
#include "codeprobe/synth.h"

namespace {

using namespace codeprobe;

unsigned default_jobs() {
  if (const char *env = std::getenv("CODEPROBE_JOBS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<unsigned>(parsed);
  }
  return 1;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::vector<CodeSequence> load_codes_maybe_infer(const std::string &path,
                                                 int32_t codebook_size) {
  if (codebook_size > 0) return load_codes(path, codebook_size);
  // Infer K = max code + 1 when the caller does not pin it.
  auto sequences = load_codes(path, std::numeric_limits<int32_t>::max());
  int32_t max_code = 0;
  for (const CodeSequence &seq : sequences)
    for (int32_t code : seq.codes) max_code = std::max(max_code, code);
  for (CodeSequence &seq : sequences) seq.codebook_size = max_code + 1;
  return sequences;
}

struct EvalArgs {
  std::string codes_path;
  std::string alignments_path;
  std::string output = "report.csv";
  std::string metrics = "nmi,dc,rsa,abx";
  std::string triples_path;
  std::string save_probe_path;
  std::string silence_label = kDefaultSilenceLabel;
  std::string correlation = "pearson";
  std::string abx_input = "slice";
  int32_t codebook_size = 0;
  int64_t frame_factor = 1;
  uint64_t seed = 0;
  uint64_t pair_budget = 5'000'000;
  uint64_t max_per_contrast = 500;
  bool keep_silence = false;
  bool skip_bad = false;
  bool make_triples = false;
  bool within_speaker = false;
  unsigned jobs = default_jobs();
};

int run_eval(const EvalArgs &args) {
  Stopwatch timer;
  RunManifest manifest("eval");
  manifest.add_input(args.codes_path);
  manifest.add_input(args.alignments_path);
  if (!args.triples_path.empty()) manifest.add_input(args.triples_path);

  EvalOptions options;
  options.metric_nmi = options.metric_dc = false;
  options.metric_rsa = options.metric_abx = false;
  std::istringstream metric_list(args.metrics);
  std::string metric;
  while (std::getline(metric_list, metric, ',')) {
    if (metric == "nmi") options.metric_nmi = true;
    else if (metric == "dc") options.metric_dc = true;
    else if (metric == "rsa") options.metric_rsa = true;
    else if (metric == "abx") options.metric_abx = true;
    else if (!metric.empty())
      throw std::invalid_argument("unknown metric \"" + metric +
                                  "\" (choose from nmi,dc,rsa,abx)");
  }
  if (options.metric_abx && args.triples_path.empty() && !args.make_triples)
    throw std::invalid_argument(
        "abx requires --triples FILE or --make-triples");

  options.seed = args.seed;
  options.keep_silence = args.keep_silence;
  options.silence_label = args.silence_label;
  options.correlation = correlation_kind_from_string(args.correlation);
  options.pair_budget = args.pair_budget;
  options.max_per_contrast = args.max_per_contrast;
  options.within_speaker = args.within_speaker;
  options.abx_input = args.abx_input;
  options.jobs = args.jobs;

  manifest.set_flag("metrics", args.metrics);
  manifest.set_flag("codebook_size", static_cast<uint64_t>(args.codebook_size));
  manifest.set_flag("frame_factor", static_cast<uint64_t>(args.frame_factor));
  manifest.set_flag("keep_silence", args.keep_silence ? "true" : "false");
  manifest.set_flag("silence_label", args.silence_label);
  manifest.set_flag("skip_bad", args.skip_bad ? "true" : "false");
  manifest.set_flag("correlation", args.correlation);
  manifest.set_flag("pair_budget", args.pair_budget);
  manifest.set_flag("max_per_contrast", args.max_per_contrast);
  manifest.set_flag("within_speaker", args.within_speaker ? "true" : "false");
  manifest.set_flag("make_triples", args.make_triples ? "true" : "false");
  manifest.set_flag("abx_input", args.abx_input);
  manifest.set_flag("jobs", static_cast<uint64_t>(args.jobs),
                    /*affects_run_id=*/false);
  manifest.set_flag("output", args.output, /*affects_run_id=*/false);
  manifest.set_seed("master", args.seed);
  manifest.set_seed("split", derive_seed(args.seed, "split"));
  manifest.set_seed("pairs", derive_seed(args.seed, "pairs"));
  manifest.set_seed("triples", derive_seed(args.seed, "triples"));

  auto codes = load_codes_maybe_infer(args.codes_path, args.codebook_size);
  const auto alignments = load_alignments(args.alignments_path, args.frame_factor);
  JoinOptions join_options;
  join_options.skip_bad = args.skip_bad;

  TripleSet external;
  const TripleSet *triples = nullptr;
  if (options.metric_abx && !args.triples_path.empty()) {
    external = read_triples(args.triples_path, codes);
    triples = &external;
  }

  const auto corpus = join_corpus(std::move(codes), alignments, join_options);
  const EvalResult result = evaluate_corpus(corpus, options, triples);

  if (!args.save_probe_path.empty()) {
    if (!result.probe)
      throw std::invalid_argument("--save-probe requires the dc metric");
    write_text_file(args.save_probe_path, result.probe->to_json());
  }

  manifest.set_duration_seconds(timer.seconds());
  write_report_csv(args.output, manifest.run_id(), result.rows);
  write_text_file(args.output + ".manifest.json", manifest.to_json() + "\n");
  std::cout << "eval: wrote " << result.rows.size() << " rows to "
            << args.output << " (run " << manifest.run_id() << ")\n";
  return 0;
}

struct TriplesArgs {
  std::string codes_path;
  std::string alignments_path;
  std::string output = "triples.tsv";
  std::string silence_label = kDefaultSilenceLabel;
  int32_t codebook_size = 0;
  int64_t frame_factor = 1;
  uint64_t seed = 0;
  uint64_t max_per_contrast = 500;
  bool within_speaker = false;
  bool skip_bad = false;
};

int run_triples(const TriplesArgs &args) {
  Stopwatch timer;
  RunManifest manifest("triples");
  manifest.add_input(args.codes_path);
  manifest.add_input(args.alignments_path);
  manifest.set_flag("codebook_size", static_cast<uint64_t>(args.codebook_size));
  manifest.set_flag("frame_factor", static_cast<uint64_t>(args.frame_factor));
  manifest.set_flag("silence_label", args.silence_label);
  manifest.set_flag("max_per_contrast", args.max_per_contrast);
  manifest.set_flag("within_speaker", args.within_speaker ? "true" : "false");
  manifest.set_flag("skip_bad", args.skip_bad ? "true" : "false");
  manifest.set_flag("output", args.output, /*affects_run_id=*/false);
  manifest.set_seed("master", args.seed);
  manifest.set_seed("triples", derive_seed(args.seed, "triples"));

  auto codes = load_codes_maybe_infer(args.codes_path, args.codebook_size);
  const auto alignments = load_alignments(args.alignments_path, args.frame_factor);
  JoinOptions join_options;
  join_options.skip_bad = args.skip_bad;
  const auto corpus = join_corpus(std::move(codes), alignments, join_options);

  const auto segments = extract_segments(corpus, args.silence_label);
  const TripleSet triples =
      build_triples(segments, args.max_per_contrast,
                    derive_seed(args.seed, "triples"), args.within_speaker);
  write_triples(args.output, triples);
  manifest.set_duration_seconds(timer.seconds());
  write_text_file(args.output + ".manifest.json", manifest.to_json() + "\n");
  std::cout << "triples: wrote " << triples.size() << " triples over "
            << triples.contrast_names.size() << " contrasts to " << args.output
            << "\n";
  return 0;
}

struct SynthArgs {
  std::string out_dir = "synth";
  ChannelConfig config;
  unsigned jobs = default_jobs();
};

int run_synth(const SynthArgs &args) {
  Stopwatch timer;
  RunManifest manifest("synth");
  manifest.set_flag("codebook", static_cast<uint64_t>(args.config.codebook_size));
  manifest.set_flag("phonemes", static_cast<uint64_t>(args.config.n_phonemes));
  manifest.set_flag("speakers", static_cast<uint64_t>(args.config.n_speakers));
  manifest.set_flag("utts", static_cast<uint64_t>(args.config.n_utterances));
  manifest.set_flag("purity", args.config.purity);
  manifest.set_flag("leakage", args.config.speaker_leakage);
  manifest.set_flag("frames_min", static_cast<uint64_t>(args.config.frames_per_phoneme.first));
  manifest.set_flag("frames_max", static_cast<uint64_t>(args.config.frames_per_phoneme.second));
  manifest.set_flag("len_min", static_cast<uint64_t>(args.config.utterance_length.first));
  manifest.set_flag("len_max", static_cast<uint64_t>(args.config.utterance_length.second));
  manifest.set_flag("out_dir", args.out_dir, /*affects_run_id=*/false);
  manifest.set_flag("jobs", static_cast<uint64_t>(args.jobs),
                    /*affects_run_id=*/false);
  manifest.set_seed("master", args.config.seed);

  const SynthCorpus corpus = generate(args.config, args.jobs);
  const auto paths = write_synth_corpus(args.out_dir, args.config, corpus);
  manifest.set_duration_seconds(timer.seconds());
  write_text_file(args.out_dir + "/manifest.json", manifest.to_json() + "\n");
  std::cout << "synth: wrote " << corpus.utterances.size()
            << " utterances to " << args.out_dir << "\n";
  for (const std::string &path : paths) std::cout << "  " << path << "\n";
  return 0;
}

struct SweepArgs {
  SweepOptions options;
  std::string output = "sweep.csv";
  std::string plot_path;
  std::string correlation = "pearson";
  std::string codebook_grid;
  std::string purity_grid;
};

int run_sweep_cmd(SweepArgs args) {
  Stopwatch timer;
  args.options.correlation = correlation_kind_from_string(args.correlation);
  if (!args.codebook_grid.empty()) {
    args.options.codebook_grid.clear();
    std::istringstream grid(args.codebook_grid);
    std::string item;
    while (std::getline(grid, item, ','))
      args.options.codebook_grid.push_back(std::stoi(item));
  }
  if (!args.purity_grid.empty()) {
    args.options.purity_grid.clear();
    std::istringstream grid(args.purity_grid);
    std::string item;
    while (std::getline(grid, item, ','))
      args.options.purity_grid.push_back(std::stod(item));
  }

  RunManifest manifest("sweep");
  manifest.set_flag("recipe", args.options.recipe);
  manifest.set_flag("seeds_per_cell", static_cast<uint64_t>(args.options.seeds_per_cell));
  manifest.set_flag("utts", static_cast<uint64_t>(args.options.utterances));
  manifest.set_flag("phonemes", static_cast<uint64_t>(args.options.phonemes));
  manifest.set_flag("speakers", static_cast<uint64_t>(args.options.speakers));
  manifest.set_flag("purity", args.options.purity);
  manifest.set_flag("codebook", static_cast<uint64_t>(args.options.codebook));
  {
    std::ostringstream grid;
    for (size_t i = 0; i < args.options.codebook_grid.size(); ++i)
      grid << (i ? "," : "") << args.options.codebook_grid[i];
    manifest.set_flag("codebook_grid", grid.str());
  }
  {
    std::ostringstream grid;
    for (size_t i = 0; i < args.options.purity_grid.size(); ++i)
      grid << (i ? "," : "") << format_double(args.options.purity_grid[i]);
    manifest.set_flag("purity_grid", grid.str());
  }
  manifest.set_flag("pair_budget", args.options.pair_budget);
  manifest.set_flag("max_per_contrast", args.options.max_per_contrast);
  manifest.set_flag("correlation", args.correlation);
  manifest.set_flag("loess_span", args.options.loess_span);
  manifest.set_flag("jobs", static_cast<uint64_t>(args.options.jobs),
                    /*affects_run_id=*/false);
  manifest.set_flag("output", args.output, /*affects_run_id=*/false);
  manifest.set_seed("master", args.options.seed);

  const SweepOutput output = run_sweep(args.options);
  manifest.set_duration_seconds(timer.seconds());
  write_report_csv(args.output, manifest.run_id(), output.rows);
  write_text_file(args.output + ".manifest.json", manifest.to_json() + "\n");
  if (!args.plot_path.empty()) {
    const std::string x_label =
        args.options.recipe == "purity" ? "purity" : "log2 codebook size";
    write_metric_panels_svg(args.plot_path, output.series, x_label,
                            args.options.loess_span);
    std::cout << "sweep: wrote plot to " << args.plot_path << "\n";
  }
  std::cout << "sweep: wrote " << output.rows.size() << " rows to "
            << args.output << " (run " << manifest.run_id() << ")\n";
  return 0;
}

struct QuantizeArgs {
  std::string codebook_path;
  std::string features_path;
  std::string output = "codes.tsv";
  unsigned jobs = default_jobs();
};

int run_quantize(const QuantizeArgs &args) {
  Stopwatch timer;
  RunManifest manifest("quantize");
  manifest.add_input(args.codebook_path);
  manifest.add_input(args.features_path);
  manifest.set_flag("output", args.output, /*affects_run_id=*/false);
  manifest.set_flag("jobs", static_cast<uint64_t>(args.jobs),
                    /*affects_run_id=*/false);

  const Codebook codebook = load_codebook(args.codebook_path);
  const auto features = load_features(args.features_path);
  std::vector<CodeSequence> codes;
  codes.reserve(features.size());
  for (const FeatureSequence &sequence : features)
    codes.push_back(quantize(sequence, codebook, args.jobs));
  write_codes(args.output, codes);
  manifest.set_duration_seconds(timer.seconds());
  write_text_file(args.output + ".manifest.json", manifest.to_json() + "\n");
  std::cout << "quantize: wrote " << codes.size() << " utterances to "
            << args.output << "\n";
  return 0;
}

struct ReportArgs {
  std::string input;
  std::string corr;  // "metricA,metricB"
  std::string loess_metric;
  std::string x_key = "K";  // config key used as the LOESS x coordinate
  std::string kind = "pearson";
  double span = 0.75;
  bool summary = false;
};

std::map<std::string, std::string> parse_config(const std::string &config) {
  std::map<std::string, std::string> out;
  std::istringstream in(config);
  std::string item;
  while (std::getline(in, item, ';')) {
    const size_t eq = item.find('=');
    if (eq != std::string::npos)
      out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

int run_report(const ReportArgs &args) {
  const ParsedReport report = read_report_csv(args.input);
  if (report.rows.empty()) {
    std::cout << "report: no rows in " << args.input << "\n";
    return 0;
  }

  bool did_something = false;
  if (!args.corr.empty()) {
    const size_t comma = args.corr.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("--corr wants \"metricA,metricB\"");
    const std::string metric_a = args.corr.substr(0, comma);
    const std::string metric_b = args.corr.substr(comma + 1);
    // Match rows of the two metrics by (config, seed).
    std::map<std::pair<std::string, uint64_t>, double> a_rows;
    std::vector<double> xs, ys;
    for (const MetricRow &row : report.rows)
      if (row.metric == metric_a) a_rows[{row.config, row.seed}] = row.value;
    for (const MetricRow &row : report.rows) {
      if (row.metric != metric_b) continue;
      auto it = a_rows.find({row.config, row.seed});
      if (it == a_rows.end()) continue;
      xs.push_back(it->second);
      ys.push_back(row.value);
    }
    if (xs.size() < 3)
      throw std::invalid_argument("--corr: fewer than 3 matched rows for " +
                                  metric_a + " and " + metric_b);
    const double r = metric_correlation(
        xs, ys, correlation_kind_from_string(args.kind));
    std::cout << "corr(" << metric_a << ", " << metric_b << ") [" << args.kind
              << ", n=" << xs.size() << "] = " << format_double(r) << "\n";
    did_something = true;
  }

  if (!args.loess_metric.empty()) {
    std::vector<std::pair<double, double>> points;
    for (const MetricRow &row : report.rows) {
      if (row.metric != args.loess_metric) continue;
      const auto config = parse_config(row.config);
      auto it = config.find(args.x_key);
      if (it == config.end()) continue;
      double x = std::stod(it->second);
      if (args.x_key == "K") x = std::log2(x);
      points.emplace_back(x, row.value);
    }
    if (points.size() < 3)
      throw std::invalid_argument("--loess: fewer than 3 rows carry config key \"" +
                                  args.x_key + "\"");
    std::cout << "x,fitted_" << args.loess_metric << "\n";
    for (const auto &[x, fitted] : loess(points, args.span))
      std::cout << format_double(x) << ',' << format_double(fitted) << "\n";
    did_something = true;
  }

  if (args.summary || !did_something) {
    struct Group {
      double sum = 0.0;
      double min = std::numeric_limits<double>::infinity();
      double max = -std::numeric_limits<double>::infinity();
      size_t count = 0;
    };
    std::map<std::pair<std::string, std::string>, Group> groups;
    for (const MetricRow &row : report.rows) {
      Group &g = groups[{row.metric, row.input_kind}];
      g.sum += row.value;
      g.min = std::min(g.min, row.value);
      g.max = std::max(g.max, row.value);
      ++g.count;
    }
    std::cout << "metric\tinput_kind\tn_rows\tmean\tmin\tmax\n";
    for (const auto &[key, g] : groups) {
      std::cout << key.first << '\t' << key.second << '\t' << g.count << '\t'
                << format_double(g.sum / static_cast<double>(g.count)) << '\t'
                << format_double(g.min) << '\t' << format_double(g.max) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char *argv[]) {
  CLI::App app{"codeprobe: evaluate discrete speech code sequences against "
               "phoneme annotations (NMI, diagnostic classifiers, RSA, ABX)"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App *eval = app.add_subcommand(
      "eval", "Run the frame/utterance metrics and write a report CSV");
  eval->add_option("--codes", eval_args.codes_path, "Codes file")->required();
  eval->add_option("--alignments", eval_args.alignments_path, "Alignment file")
      ->required();
  eval->add_option("--codebook-size", eval_args.codebook_size,
                   "Codebook size K (0 = infer max code + 1)");
  eval->add_option("--metrics", eval_args.metrics,
                   "Comma list from nmi,dc,rsa,abx");
  eval->add_option("-o,--output", eval_args.output, "Report CSV path");
  eval->add_option("--seed", eval_args.seed, "Master seed");
  eval->add_option("--frame-factor", eval_args.frame_factor,
                   "Alignment frames per code frame");
  eval->add_flag("--keep-silence", eval_args.keep_silence,
                 "Keep silence frames in NMI/DC");
  eval->add_option("--silence-label", eval_args.silence_label,
                   "Reserved silence label");
  eval->add_flag("--skip-bad", eval_args.skip_bad,
                 "Drop utterances with out-of-range alignments");
  eval->add_option("--correlation", eval_args.correlation,
                   "pearson or spearman (RSA)");
  eval->add_option("--pair-budget", eval_args.pair_budget,
                   "Max RSA pairs before subsampling");
  eval->add_option("--triples", eval_args.triples_path,
                   "Score ABX on this triples file");
  eval->add_flag("--make-triples", eval_args.make_triples,
                 "Build ABX triples from the evaluation half");
  eval->add_option("--max-per-contrast", eval_args.max_per_contrast,
                   "Triple cap per contrast");
  eval->add_flag("--within-speaker", eval_args.within_speaker,
                 "Restrict triples to one speaker");
  eval->add_option("--abx-input", eval_args.abx_input,
                   "slice or segment (report metadata)");
  eval->add_option("--save-probe", eval_args.save_probe_path,
                   "Serialize the trained DC to this JSON file");
  eval->add_option("--jobs", eval_args.jobs,
                   "Worker threads (default $CODEPROBE_JOBS or 1)");

  TriplesArgs triples_args;
  CLI::App *triples = app.add_subcommand(
      "triples", "Extract minimal-pair ABX triples to a TSV file");
  triples->add_option("--codes", triples_args.codes_path, "Codes file")
      ->required();
  triples->add_option("--alignments", triples_args.alignments_path,
                      "Alignment file")
      ->required();
  triples->add_option("--codebook-size", triples_args.codebook_size,
                      "Codebook size K (0 = infer)");
  triples->add_option("-o,--output", triples_args.output, "Triples TSV path");
  triples->add_option("--seed", triples_args.seed, "Sampling seed");
  triples->add_option("--max-per-contrast", triples_args.max_per_contrast,
                      "Triple cap per contrast");
  triples->add_flag("--within-speaker", triples_args.within_speaker,
                    "Restrict triples to one speaker");
  triples->add_option("--silence-label", triples_args.silence_label,
                      "Reserved silence label");
  triples->add_option("--frame-factor", triples_args.frame_factor,
                      "Alignment frames per code frame");
  triples->add_flag("--skip-bad", triples_args.skip_bad,
                    "Drop utterances with out-of-range alignments");

  SynthArgs synth_args;
  CLI::App *synth = app.add_subcommand(
      "synth", "Generate a synthetic aligned corpus with a known channel");
  synth->add_option("--out-dir", synth_args.out_dir, "Output directory");
  synth->add_option("--utts", synth_args.config.n_utterances, "Utterance count");
  synth->add_option("--codebook", synth_args.config.codebook_size,
                    "Codebook size K");
  synth->add_option("--phonemes", synth_args.config.n_phonemes,
                    "Phoneme inventory size");
  synth->add_option("--speakers", synth_args.config.n_speakers, "Speaker count");
  synth->add_option("--purity", synth_args.config.purity,
                    "Phoneme-block emission probability alpha");
  synth->add_option("--leakage", synth_args.config.speaker_leakage,
                    "Speaker-block probability beta (of the impure mass)");
  synth->add_option("--frames-min", synth_args.config.frames_per_phoneme.first,
                    "Min frames per phoneme");
  synth->add_option("--frames-max", synth_args.config.frames_per_phoneme.second,
                    "Max frames per phoneme");
  synth->add_option("--len-min", synth_args.config.utterance_length.first,
                    "Min phonemes per utterance");
  synth->add_option("--len-max", synth_args.config.utterance_length.second,
                    "Max phonemes per utterance");
  synth->add_option("--seed", synth_args.config.seed, "Generation seed");
  synth->add_option("--jobs", synth_args.jobs, "Worker threads");

  SweepArgs sweep_args;
  sweep_args.options.jobs = default_jobs();
  CLI::App *sweep = app.add_subcommand(
      "sweep", "Run an experiment recipe over synthetic corpora");
  sweep->add_option("--recipe", sweep_args.options.recipe,
                    "codebook | purity | stimulus");
  sweep->add_option("-o,--output", sweep_args.output, "Report CSV path");
  sweep->add_option("--seed", sweep_args.options.seed, "Master seed");
  sweep->add_option("--seeds-per-cell", sweep_args.options.seeds_per_cell,
                    "Generation seeds per cell");
  sweep->add_option("--utts", sweep_args.options.utterances,
                    "Utterances per cell");
  sweep->add_option("--phonemes", sweep_args.options.phonemes,
                    "Phoneme inventory size");
  sweep->add_option("--speakers", sweep_args.options.speakers, "Speaker count");
  sweep->add_option("--purity", sweep_args.options.purity,
                    "Fixed purity for codebook/stimulus recipes");
  sweep->add_option("--codebook", sweep_args.options.codebook,
                    "Fixed K for the purity recipe");
  sweep->add_option("--codebook-grid", sweep_args.codebook_grid,
                    "Comma list of K values");
  sweep->add_option("--purity-grid", sweep_args.purity_grid,
                    "Comma list of purity values");
  sweep->add_option("--pair-budget", sweep_args.options.pair_budget,
                    "Max RSA pairs before subsampling");
  sweep->add_option("--max-per-contrast", sweep_args.options.max_per_contrast,
                    "Triple cap per contrast");
  sweep->add_option("--correlation", sweep_args.correlation,
                    "pearson or spearman");
  sweep->add_option("--loess-span", sweep_args.options.loess_span,
                    "LOESS span in (0, 1]");
  sweep->add_option("--plot", sweep_args.plot_path,
                    "Write metric panels to this SVG file");
  sweep->add_option("--jobs", sweep_args.options.jobs, "Worker threads");

  QuantizeArgs quantize_args;
  CLI::App *quant = app.add_subcommand(
      "quantize", "Map feature vectors to nearest-prototype code indices");
  quant->add_option("--codebook", quantize_args.codebook_path, "Codebook file")
      ->required();
  quant->add_option("--features", quantize_args.features_path, "Feature file")
      ->required();
  quant->add_option("-o,--output", quantize_args.output, "Codes TSV path");
  quant->add_option("--jobs", quantize_args.jobs, "Worker threads");

  ReportArgs report_args;
  CLI::App *report = app.add_subcommand(
      "report", "Summarize or post-process a report CSV");
  report->add_option("-i,--input", report_args.input, "Report CSV")->required();
  report->add_flag("--summary", report_args.summary,
                   "Print per-metric summary (default action)");
  report->add_option("--corr", report_args.corr,
                     "Correlate two metrics: metricA,metricB");
  report->add_option("--kind", report_args.kind, "pearson or spearman");
  report->add_option("--loess", report_args.loess_metric,
                     "LOESS-smooth this metric over a config key");
  report->add_option("--x-key", report_args.x_key,
                     "Config key giving x (K is log2-scaled)");
  report->add_option("--span", report_args.span, "LOESS span");

  try {
    app.parse(argc, argv);
    if (eval->parsed()) return run_eval(eval_args);
    if (triples->parsed()) return run_triples(triples_args);
    if (synth->parsed()) return run_synth(synth_args);
    if (sweep->parsed()) return run_sweep_cmd(sweep_args);
    if (quant->parsed()) return run_quantize(quantize_args);
    if (report->parsed()) return run_report(report_args);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
