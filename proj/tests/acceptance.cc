// tests/acceptance.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails. argv[1] is the path to
// the codeprobe CLI binary (used by the performance and determinism
// criteria).

#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "codeprobe/abx.h"
#include "codeprobe/corpus.h"
#include "codeprobe/editdist.h"
#include "codeprobe/infometrics.h"
#include "codeprobe/pipeline.h"
#include "codeprobe/probe.h"
#include "codeprobe/quantize.h"
#include "codeprobe/report.h"
#include "codeprobe/synth.h"

using namespace codeprobe;

namespace {

int g_failures = 0;

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

void report(int criterion, bool ok, const std::string &detail, double seconds) {
  std::ostringstream line;
  line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
       << detail << " (" << std::fixed << std::setprecision(2) << seconds
       << "s)";
  std::cout << line.str() << std::endl;
  if (!ok) ++g_failures;
}

template <typename Body>
void criterion(int number, const Body &body) {
  Stopwatch timer;
  try {
    const auto [ok, detail] = body();
    report(number, ok, detail, timer.seconds());
  } catch (const std::exception &e) {
    report(number, false, std::string("exception: ") + e.what(),
           timer.seconds());
  }
}

// ---------------------------------------------------------------------------
// Shared random-histogram machinery for criteria 1 and 2.

struct RandomHistogram {
  JointHistogram hist;
  std::vector<FramePair> frames;
};

RandomHistogram random_histogram(Rng &rng, size_t n_codes, size_t n_labels,
                                 size_t n_frames) {
  std::vector<size_t> favorite(n_codes);
  for (auto &f : favorite) f = rng.below(n_labels);
  RandomHistogram out;
  out.frames.reserve(n_frames);
  std::vector<int32_t> codes, labels;
  codes.reserve(n_frames);
  labels.reserve(n_frames);
  for (size_t i = 0; i < n_frames; ++i) {
    const auto code = static_cast<int32_t>(rng.below(n_codes));
    const auto label = static_cast<int32_t>(
        rng.unit() < 0.55 ? favorite[static_cast<size_t>(code)]
                          : rng.below(n_labels));
    out.frames.push_back({code, label});
    codes.push_back(code);
    labels.push_back(label);
  }
  out.hist = build_histogram(codes, labels, n_codes, n_labels);
  return out;
}

// Independent conditional entropy H(label | code) straight from counts.
double oracle_h_label_given_code(const JointHistogram &h) {
  const auto code_marginal = h.code_marginal();
  const auto n = static_cast<double>(h.total);
  double result = 0.0;
  for (size_t x = 0; x < h.n_codes; ++x) {
    if (code_marginal[x] == 0) continue;
    for (size_t y = 0; y < h.n_labels; ++y) {
      if (h.at(x, y) == 0) continue;
      result -= static_cast<double>(h.at(x, y)) / n *
                std::log(static_cast<double>(h.at(x, y)) /
                         static_cast<double>(code_marginal[x]));
    }
  }
  return result;
}

double oracle_entropy_counts(const std::vector<uint64_t> &counts) {
  double total = 0.0;
  for (uint64_t c : counts) total += static_cast<double>(c);
  double h = 0.0;
  for (uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h;
}

// V-measure from homogeneity and completeness, the independent route.
double oracle_v_measure(const JointHistogram &h) {
  const double h_code = oracle_entropy_counts(h.code_marginal());
  const double h_label = oracle_entropy_counts(h.label_marginal());
  const double h_label_given_code = oracle_h_label_given_code(h);
  double h_code_given_label = 0.0;
  {
    const auto label_marginal = h.label_marginal();
    const auto n = static_cast<double>(h.total);
    for (size_t y = 0; y < h.n_labels; ++y) {
      if (label_marginal[y] == 0) continue;
      for (size_t x = 0; x < h.n_codes; ++x) {
        if (h.at(x, y) == 0) continue;
        h_code_given_label -= static_cast<double>(h.at(x, y)) / n *
                              std::log(static_cast<double>(h.at(x, y)) /
                                       static_cast<double>(label_marginal[y]));
      }
    }
  }
  const double homogeneity =
      h_label <= 0.0 ? 1.0 : 1.0 - h_label_given_code / h_label;
  const double completeness =
      h_code <= 0.0 ? 1.0 : 1.0 - h_code_given_label / h_code;
  if (homogeneity + completeness <= 0.0) return 0.0;
  return 2.0 * homogeneity * completeness / (homogeneity + completeness);
}

std::vector<RandomHistogram> &shared_histograms() {
  static std::vector<RandomHistogram> histograms = [] {
    std::vector<RandomHistogram> out;
    Rng rng(20250810);
    for (int trial = 0; trial < 20; ++trial) {
      const size_t n_codes = 2 + rng.below(1023);  // up to 1024
      const size_t n_labels = 2 + rng.below(49);   // up to 50
      out.push_back(random_histogram(rng, n_codes, n_labels, 50'000));
    }
    return out;
  }();
  return histograms;
}

// ---------------------------------------------------------------------------
// Criterion 6 helpers: enumeration of short strings and a recursive oracle.

std::vector<SymbolString> all_strings(int alphabet, int max_len) {
  std::vector<SymbolString> out = {{}};
  size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    const size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (int32_t s = 0; s < alphabet; ++s) {
        SymbolString next = out[i];
        next.push_back(s);
        out.push_back(std::move(next));
      }
    level_begin = level_end;
  }
  return out;
}

// Top-down memoized recursion on a fixed-size table.
size_t oracle_levenshtein(const SymbolString &a, const SymbolString &b) {
  std::array<std::array<int, 8>, 8> memo{};
  for (auto &row : memo) row.fill(-1);
  auto rec = [&](auto &&self, size_t i, size_t j) -> int {
    if (i == 0) return static_cast<int>(j);
    if (j == 0) return static_cast<int>(i);
    if (memo[i][j] >= 0) return memo[i][j];
    int best = self(self, i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0 : 1);
    best = std::min(best, self(self, i - 1, j) + 1);
    best = std::min(best, self(self, i, j - 1) + 1);
    memo[i][j] = best;
    return best;
  };
  return static_cast<size_t>(rec(rec, a.size(), b.size()));
}

// ---------------------------------------------------------------------------
// CLI plumbing for criteria 7 and 8.

std::string g_cli_path = "./codeprobe";

std::filesystem::path work_dir() {
  static std::filesystem::path dir = [] {
    auto path = std::filesystem::temp_directory_path() /
                ("codeprobe_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
    return path;
  }();
  return dir;
}

int run_cli(const std::string &args) {
  const std::string log = (work_dir() / "cli.log").string();
  const std::string command =
      "\"" + g_cli_path + "\" " + args + " > " + log + " 2>&1";
  const int status = std::system(command.c_str());
  if (status != 0) {
    std::ifstream in(log);
    std::string line;
    while (std::getline(in, line)) std::cerr << "    cli: " << line << "\n";
  }
  return status;
}

std::string slurp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------

// Criterion 1: the closed-form probe's cross-entropy on its fitting data is
// the empirical conditional entropy, and chains to mutual information.
std::pair<bool, std::string> criterion1() {
  double worst_ce = 0.0, worst_mi = 0.0;
  for (const RandomHistogram &rh : shared_histograms()) {
    const ClosedFormProbe probe = fit_closed_form(rh.hist);
    const double ce = cross_entropy(probe, rh.frames);
    worst_ce =
        std::max(worst_ce, std::abs(ce - oracle_h_label_given_code(rh.hist)));
    worst_mi = std::max(worst_mi,
                        std::abs(mutual_information(rh.hist) -
                                 (entropy(rh.hist, Axis::kLabel) - ce)));
  }
  const bool ok = worst_ce < 1e-10 && worst_mi < 1e-9;
  std::ostringstream detail;
  detail << "closed-form identity on 20 histograms, max |CE-H(Y|X)|="
         << worst_ce << ", max |I-(H(Y)-CE)|=" << worst_mi;
  return {ok, detail.str()};
}

// Criterion 2: NMI agrees with an independent V-measure oracle.
std::pair<bool, std::string> criterion2() {
  double worst = 0.0;
  for (const RandomHistogram &rh : shared_histograms())
    worst = std::max(worst, std::abs(nmi(rh.hist) - oracle_v_measure(rh.hist)));
  std::ostringstream detail;
  detail << "NMI vs V-measure on 20 histograms, max |diff|=" << worst;
  return {worst < 1e-12, detail.str()};
}

// Criterion 3: abx_score matches brute-force enumeration of every triple on
// small corpora; gold codes score 0, identical codes score exactly 0.5.
std::vector<AlignedUtterance> small_corpus(Rng &rng, size_t utterances,
                                           int phones, int codebook,
                                           int mode /*0 random,1 gold,2 const*/) {
  std::vector<AlignedUtterance> corpus;
  for (size_t u = 0; u < utterances; ++u) {
    AlignedUtterance utterance;
    utterance.codes.utterance_id = "u" + std::to_string(u);
    utterance.codes.speaker_id = "s" + std::to_string(rng.below(2));
    utterance.codes.codebook_size = codebook;
    const size_t n = 6 + rng.below(6);
    int64_t frame = 0;
    int32_t previous = -1;
    for (size_t p = 0; p < n; ++p) {
      auto phone = static_cast<int32_t>(
          rng.below(previous < 0 ? static_cast<uint64_t>(phones)
                                 : static_cast<uint64_t>(phones - 1)));
      if (previous >= 0 && phone >= previous) ++phone;
      previous = phone;
      const auto run = static_cast<int64_t>(1 + rng.below(3));
      utterance.intervals.push_back(
          {"p" + std::to_string(phone), frame, frame + run});
      for (int64_t f = 0; f < run; ++f) {
        int32_t code = 0;
        if (mode == 0) code = static_cast<int32_t>(rng.below(codebook));
        if (mode == 1) code = phone;
        if (mode == 2) code = 3;
        utterance.codes.codes.push_back(code);
      }
      frame += run;
    }
    corpus.push_back(std::move(utterance));
  }
  return corpus;
}

struct BruteAbx {
  double macro = 0.0;
  double micro = 0.0;
  size_t n_triples = 0;
  size_t n_contrasts = 0;
};

// Direct enumeration over all valid (A, B, X) segment index triples. The
// aggregation key sorts by (left, right, center_a, center_b) so the macro
// average visits contrasts in the same order as the scorer and the exact
// equality check stays meaningful bit for bit.
BruteAbx brute_force_abx(const std::vector<Segment> &segments) {
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, std::pair<double, uint64_t>> contrasts;
  for (size_t a = 0; a < segments.size(); ++a) {
    for (size_t x = 0; x < segments.size(); ++x) {
      if (a == x) continue;
      if (segments[a].trigram != segments[x].trigram) continue;
      for (size_t b = 0; b < segments.size(); ++b) {
        if (segments[b].trigram == segments[a].trigram) continue;
        if (segments[b].trigram[0] != segments[a].trigram[0]) continue;
        if (segments[b].trigram[2] != segments[a].trigram[2]) continue;
        const double e =
            abx_error_one(segments[a].code_slice, segments[b].code_slice,
                          segments[x].code_slice);
        auto &slot = contrasts[{segments[a].trigram[0], segments[a].trigram[2],
                                segments[a].trigram[1], segments[b].trigram[1]}];
        slot.first += e;
        slot.second += 1;
      }
    }
  }
  BruteAbx out;
  out.n_contrasts = contrasts.size();
  if (contrasts.empty()) return out;
  double macro_sum = 0.0, micro_sum = 0.0;
  uint64_t total = 0;
  for (const auto &[key, slot] : contrasts) {
    macro_sum += slot.first / static_cast<double>(slot.second);
    micro_sum += slot.first;
    total += slot.second;
  }
  out.n_triples = total;
  out.macro = macro_sum / static_cast<double>(contrasts.size());
  out.micro = micro_sum / static_cast<double>(total);
  return out;
}

std::pair<bool, std::string> criterion3() {
  size_t corpora = 0, triples_checked = 0;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(2000 + seed);
    const auto corpus = small_corpus(rng, 8 + seed % 3, 3, 6, /*mode=*/0);
    const auto segments = extract_segments(corpus);
    const BruteAbx brute = brute_force_abx(segments);
    if (brute.n_triples == 0) continue;
    const TripleSet triples = build_triples(segments, UINT64_MAX, 0);
    const AbxScore score = abx_score(triples);
    if (score.n_triples != brute.n_triples ||
        score.n_contrasts != brute.n_contrasts)
      return {false, "triple enumeration disagrees with brute force"};
    if (score.micro_error != brute.micro || score.macro_error != brute.macro) {
      std::ostringstream detail;
      detail << "score mismatch: macro " << score.macro_error << " vs "
             << brute.macro << ", micro " << score.micro_error << " vs "
             << brute.micro;
      return {false, detail.str()};
    }
    ++corpora;
    triples_checked += score.n_triples;
  }
  if (corpora < 4) return {false, "too few enumerable corpora exercised"};

  // Gold-as-codes scores zero error; identical codes score exactly one half.
  Rng rng(3000);
  const auto gold = small_corpus(rng, 10, 3, 6, /*mode=*/1);
  const AbxScore gold_score =
      abx_score(build_triples(extract_segments(gold), UINT64_MAX, 0));
  if (gold_score.macro_error != 0.0 || gold_score.micro_error != 0.0)
    return {false, "gold-as-codes corpus did not score zero error"};
  const auto constant = small_corpus(rng, 10, 3, 6, /*mode=*/2);
  const AbxScore const_score =
      abx_score(build_triples(extract_segments(constant), UINT64_MAX, 0));
  if (const_score.macro_error != 0.5 || const_score.micro_error != 0.5)
    return {false, "identical-codes corpus did not score exactly 0.5"};

  std::ostringstream detail;
  detail << "brute-force equivalence on " << corpora << " corpora ("
         << triples_checked << " triples), gold=0, constant=0.5 exact";
  return {true, detail.str()};
}

// Criterion 4: trained-DC accuracy tracks NMI across a purity sweep.
std::pair<bool, std::string> criterion4() {
  SweepOptions options;
  options.recipe = "purity";
  options.codebook = 64;
  options.purity_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  options.seeds_per_cell = 3;
  options.utterances = 240;
  options.phonemes = 12;
  options.speakers = 8;
  options.max_per_contrast = 30;
  options.seed = 20250810;
  options.jobs = 2;
  const SweepOutput output = run_sweep(options);

  std::map<std::string, double> nmi_by_cell;
  for (const MetricRow &row : output.rows)
    if (row.metric == "nmi") nmi_by_cell[row.config] = row.value;
  std::vector<double> dc, nmi_values;
  for (const MetricRow &row : output.rows) {
    if (row.metric != "dc_accuracy") continue;
    dc.push_back(row.value);
    nmi_values.push_back(nmi_by_cell.at(row.config));
  }
  if (dc.size() != 15) return {false, "expected 15 sweep cells"};
  const double rho =
      metric_correlation(dc, nmi_values, CorrelationKind::kSpearman);
  std::ostringstream detail;
  detail << "purity sweep (K=64, 5 alphas x 3 seeds): spearman(DC, NMI)=" << rho
         << " (>= 0.95 required)";
  return {rho >= 0.95, detail.str()};
}

// Criterion 5: stimulus-size effect. (a) ABX correlates with triplet RSA
// across a K x seed grid; (b) triplet distance skew is most negative at the
// largest codebook and more negative than complete-utterance skew.
std::pair<bool, std::string> criterion5() {
  SweepOptions options;
  options.recipe = "stimulus";
  options.codebook_grid = {32, 64, 128, 256, 512, 1024};
  options.purity = 0.6;
  options.seeds_per_cell = 3;
  options.utterances = 800;
  options.phonemes = 20;
  options.speakers = 8;
  options.max_per_contrast = 150;
  options.seed = 20250810;
  options.jobs = 2;
  const SweepOutput output = run_sweep(options);

  std::map<std::string, double> abx_by_cell, rsa_triplet_by_cell;
  for (const MetricRow &row : output.rows) {
    if (row.metric == "abx_accuracy") abx_by_cell[row.config] = row.value;
    if (row.metric == "rsa_triplet") rsa_triplet_by_cell[row.config] = row.value;
  }
  std::vector<double> abx, rsa_triplet;
  for (const auto &[config, value] : abx_by_cell) {
    abx.push_back(value);
    rsa_triplet.push_back(rsa_triplet_by_cell.at(config));
  }
  if (abx.size() != 18) return {false, "expected 18 stimulus sweep cells"};
  const double r =
      metric_correlation(abx, rsa_triplet, CorrelationKind::kPearson);

  // Seed-averaged distance skewness per (input kind, K extreme).
  std::map<std::pair<std::string, bool>, std::pair<double, int>> skew_acc;
  for (const MetricRow &row : output.rows) {
    if (row.metric != "distance_skew") continue;
    const bool big = row.config.find("K=1024") != std::string::npos;
    auto &slot = skew_acc[{row.input_kind, big}];
    slot.first += row.value;
    slot.second += 1;
  }
  auto skew_mean = [&skew_acc](const std::string &kind, bool big) {
    const auto &slot = skew_acc.at({kind, big});
    return slot.first / slot.second;
  };
  const double triplet_small = skew_mean("triplet", false);
  const double triplet_big = skew_mean("triplet", true);
  const double complete_small = skew_mean("complete", false);
  const double complete_big = skew_mean("complete", true);
  const bool shape_ok = triplet_big < triplet_small &&
                        triplet_big < complete_big &&
                        triplet_big < complete_small;

  std::ostringstream detail;
  detail << "pearson(ABX, RSA-triplet)=" << r << " (>= 0.8 required); skew"
         << " triplet@K32=" << triplet_small << " triplet@K1024=" << triplet_big
         << " complete@K32=" << complete_small
         << " complete@K1024=" << complete_big;
  return {r >= 0.8 && shape_ok, detail.str()};
}

// Criterion 6: edit-distance kernel vs the recursive oracle, exhaustively.
std::pair<bool, std::string> criterion6() {
  const auto strings = all_strings(3, 6);
  if (strings.size() != 1093) return {false, "string enumeration broken"};
  uint64_t pairs = 0;
  for (const SymbolString &a : strings) {
    for (const SymbolString &b : strings) {
      if (levenshtein(a, b) != oracle_levenshtein(a, b))
        return {false, "kernel disagrees with the recursive oracle"};
      ++pairs;
    }
  }

  // Metric axioms on the length <= 4 subset (cached distance matrix).
  const auto short_strings = all_strings(3, 4);
  const size_t n = short_strings.size();
  std::vector<std::vector<uint8_t>> dist(n, std::vector<uint8_t>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      dist[i][j] =
          static_cast<uint8_t>(levenshtein(short_strings[i], short_strings[j]));
  for (size_t i = 0; i < n; ++i) {
    if (dist[i][i] != 0) return {false, "identity axiom violated"};
    for (size_t j = 0; j < n; ++j) {
      if (dist[i][j] != dist[j][i]) return {false, "symmetry violated"};
      if (i != j && dist[i][j] == 0) return {false, "distinct strings at 0"};
    }
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (dist[i][k] > dist[i][j] + dist[j][k])
          return {false, "triangle inequality violated"};

  std::ostringstream detail;
  detail << "exhaustive oracle equality on " << pairs
         << " ordered pairs (1093^2), metric axioms on the 121-string set";
  return {true, detail.str()};
}

// Criterion 7: the 5,000-utterance four-metric evaluation finishes in budget
// and parallel == sequential, byte for byte.
std::pair<bool, std::string> criterion7() {
  const auto dir = work_dir() / "perf";
  std::filesystem::create_directories(dir);
  const std::string corpus_dir = (dir / "corpus").string();
  if (run_cli("synth --out-dir " + corpus_dir +
              " --utts 5000 --codebook 64 --phonemes 20 --speakers 16"
              " --purity 0.7 --len-min 25 --len-max 35 --frames-min 5"
              " --frames-max 8 --seed 42 --jobs 2") != 0)
    return {false, "synth failed"};
  {
    const std::string codes = slurp(corpus_dir + "/codes.tsv");
    size_t lines = 0;
    for (char c : codes)
      if (c == '\n') ++lines;
    if (lines != 5000) return {false, "synth did not write 5000 code lines"};
  }

  const std::string eval_args =
      "eval --codes " + corpus_dir + "/codes.tsv --alignments " + corpus_dir +
      "/alignments.tsv --codebook-size 64 --make-triples --max-per-contrast 1"
      " --pair-budget 5000000 --seed 1 ";
  Stopwatch eval_timer;
  const std::string par_csv = (dir / "par.csv").string();
  if (run_cli(eval_args + "--jobs 4 -o " + par_csv) != 0)
    return {false, "parallel eval failed"};
  const double parallel_seconds = eval_timer.seconds();

  const std::string seq_csv = (dir / "seq.csv").string();
  if (run_cli(eval_args + "--jobs 1 -o " + seq_csv) != 0)
    return {false, "sequential eval failed"};

  if (slurp(par_csv) != slurp(seq_csv))
    return {false, "parallel and sequential reports differ"};

  const ParsedReport parsed = read_report_csv(par_csv);
  uint64_t n_triples = 0, n_pairs = 0, n_frames = 0;
  for (const MetricRow &row : parsed.rows) {
    if (row.metric == "abx_accuracy") n_triples = row.n;
    if (row.metric == "rsa_pearson") n_pairs = row.n;
    if (row.metric == "nmi") n_frames = row.n;
  }
  std::ostringstream detail;
  detail << "5000-utterance eval: " << std::fixed << std::setprecision(1)
         << parallel_seconds << "s parallel (< 600s required), " << n_triples
         << " triples (>= 100000 required), " << n_pairs << " RSA pairs, "
         << n_frames << " eval frames; parallel == sequential bytes";
  const bool ok = parallel_seconds < 600.0 && n_triples >= 100'000 &&
                  n_pairs >= 3'000'000 && n_pairs <= 5'000'000;
  return {ok, detail.str()};
}

// Criterion 8: every subcommand reruns to byte-identical output.
std::pair<bool, std::string> criterion8() {
  const auto dir = work_dir() / "determinism";
  std::filesystem::create_directories(dir);
  const std::string corpus_a = (dir / "corpus_a").string();
  const std::string corpus_b = (dir / "corpus_b").string();
  const std::string synth_args =
      " --utts 150 --codebook 16 --phonemes 8 --speakers 4 --purity 0.7"
      " --seed 11";
  if (run_cli("synth --out-dir " + corpus_a + synth_args) != 0 ||
      run_cli("synth --out-dir " + corpus_b + synth_args) != 0)
    return {false, "synth failed"};
  for (const char *name : {"codes.tsv", "alignments.tsv", "channel.json"})
    if (slurp(corpus_a + "/" + name) != slurp(corpus_b + "/" + name))
      return {false, std::string("synth rerun differs in ") + name};

  const std::string io = " --codes " + corpus_a + "/codes.tsv --alignments " +
                         corpus_a + "/alignments.tsv --codebook-size 16";
  auto rerun_identical = [&](const std::string &args, const std::string &out_a,
                             const std::string &out_b) {
    if (run_cli(args + " -o " + out_a) != 0) return false;
    if (run_cli(args + " -o " + out_b) != 0) return false;
    return slurp(out_a) == slurp(out_b);
  };
  if (!rerun_identical(
          "eval" + io + " --make-triples --max-per-contrast 20 --seed 5",
          (dir / "eval_a.csv").string(), (dir / "eval_b.csv").string()))
    return {false, "eval rerun not byte-identical"};
  if (!rerun_identical("triples" + io + " --max-per-contrast 2 --seed 5",
                       (dir / "triples_a.tsv").string(),
                       (dir / "triples_b.tsv").string()))
    return {false, "triples rerun not byte-identical"};
  if (!rerun_identical(
          "sweep --recipe purity --purity-grid 0.25,0.75 --seeds-per-cell 2"
          " --utts 50 --phonemes 6 --speakers 3 --codebook 12"
          " --max-per-contrast 8 --seed 3",
          (dir / "sweep_a.csv").string(), (dir / "sweep_b.csv").string()))
    return {false, "sweep rerun not byte-identical"};

  // Different jobs counts must also leave the report bytes unchanged.
  const std::string jobs1 = (dir / "eval_j1.csv").string();
  const std::string jobs3 = (dir / "eval_j3.csv").string();
  const std::string eval_args =
      "eval" + io + " --make-triples --max-per-contrast 20 --seed 5";
  if (run_cli(eval_args + " --jobs 1 -o " + jobs1) != 0 ||
      run_cli(eval_args + " --jobs 3 -o " + jobs3) != 0 ||
      slurp(jobs1) != slurp(jobs3))
    return {false, "jobs count changed report bytes"};

  return {true,
          "synth/eval/triples/sweep reruns byte-identical, jobs-invariant"};
}

// Criterion 9: quantizer vs the exhaustive oracle, plus explicit ties.
std::pair<bool, std::string> criterion9() {
  Rng rng(512);
  Codebook codebook;
  codebook.size = 256;
  codebook.dimension = 16;
  codebook.prototypes.resize(256 * 16);
  for (double &v : codebook.prototypes) v = rng.unit() * 2.0 - 1.0;

  FeatureSequence features;
  features.utterance_id = "u";
  features.speaker_id = "s";
  features.dimension = 16;
  features.frames.resize(10'000 * 16);
  for (double &v : features.frames) v = rng.unit() * 2.0 - 1.0;

  const CodeSequence codes = quantize(features, codebook, 2);
  for (size_t t = 0; t < features.n_frames(); ++t) {
    const auto frame = features.frame(t);
    double best = std::numeric_limits<double>::infinity();
    int32_t best_k = -1;
    for (int32_t k = 0; k < codebook.size; ++k) {
      const auto proto = codebook.prototype(k);
      double dist = 0.0;
      for (size_t i = 0; i < frame.size(); ++i)
        dist += (frame[i] - proto[i]) * (frame[i] - proto[i]);
      if (dist < best) {
        best = dist;
        best_k = k;
      }
    }
    if (codes.codes[t] != best_k)
      return {false,
              "quantizer disagrees with oracle at frame " + std::to_string(t)};
  }

  // Constructed ties: identical prototypes and exact midpoints.
  Codebook tied;
  tied.size = 4;
  tied.dimension = 2;
  tied.prototypes = {0, 0, 1, 0, 0, 0, 2, 0};  // prototypes 0 and 2 identical
  FeatureSequence probes;
  probes.utterance_id = "u";
  probes.speaker_id = "s";
  probes.dimension = 2;
  probes.frames = {0, 0, 0.5, 0, 1.5, 0};
  const CodeSequence tie_codes = quantize(probes, tied);
  if (tie_codes.codes != std::vector<int32_t>{0, 0, 1})
    return {false, "tie cases did not resolve to the lowest index"};

  return {true,
          "10000 frames (K=256, d=16) match the exhaustive oracle; ties"
          " resolve to the lowest index"};
}

}  // namespace

int main(int argc, char *argv[]) {
  if (argc > 1) g_cli_path = argv[1];
  std::cout << "codeprobe acceptance suite (cli: " << g_cli_path << ")\n";

  criterion(1, criterion1);
  criterion(2, criterion2);
  criterion(3, criterion3);
  criterion(4, criterion4);
  criterion(5, criterion5);
  criterion(6, criterion6);
  criterion(7, criterion7);
  criterion(8, criterion8);
  criterion(9, criterion9);

  std::error_code ec;
  std::filesystem::remove_all(work_dir(), ec);

  if (g_failures == 0) {
    std::cout << "all 9 criteria passed\n";
    return 0;
  }
  std::cout << g_failures << " criteria FAILED\n";
  return 1;
}
