// codeprobe/abx.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/abx.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

namespace codeprobe {

std::vector<Segment> extract_segments(std::span<const AlignedUtterance> corpus,
                                      const std::string &silence_label) {
  std::vector<Segment> segments;
  for (const AlignedUtterance &utterance : corpus) {
    std::vector<const PhonemeInterval *> speech;
    for (const PhonemeInterval &interval : utterance.intervals)
      if (interval.label != silence_label) speech.push_back(&interval);
    for (size_t i = 0; i + 2 < speech.size(); i += 3) {
      Segment segment;
      segment.utterance_id = utterance.codes.utterance_id;
      segment.speaker_id = utterance.codes.speaker_id;
      segment.trigram = {speech[i]->label, speech[i + 1]->label,
                         speech[i + 2]->label};
      segment.start = speech[i]->start;
      segment.end = speech[i + 2]->end;
      const auto &codes = utterance.codes.codes;
      segment.code_slice.assign(codes.begin() + segment.start,
                                codes.begin() + segment.end);
      if (segment.code_slice.empty()) continue;  // cannot happen with valid intervals
      segments.push_back(std::move(segment));
    }
  }
  return segments;
}

namespace {

struct ContrastKey {
  std::string group;   // speaker partition ("" for any-speaker)
  std::string left;
  std::string right;
  std::string center_a;
  std::string center_b;

  bool operator<(const ContrastKey &o) const {
    return std::tie(group, left, right, center_a, center_b) <
           std::tie(o.group, o.left, o.right, o.center_a, o.center_b);
  }
};

std::string contrast_name(const ContrastKey &key) {
  std::string name = key.left + " " + key.center_a + " " + key.right + " > " +
                     key.left + " " + key.center_b + " " + key.right;
  if (!key.group.empty()) name += " @" + key.group;
  return name;
}

}  // namespace

TripleSet build_triples(std::span<const Segment> segments,
                        uint64_t max_per_contrast, uint64_t seed,
                        bool within_speaker) {
  if (segments.empty())
    throw std::invalid_argument("build_triples: no segments");
  if (max_per_contrast == 0)
    throw std::invalid_argument("build_triples: max_per_contrast must be > 0");

  TripleSet out;
  out.segments.assign(segments.begin(), segments.end());

  // Category index: (group, left, right) -> center -> segment indices. An
  // ordered std::map keeps contrast enumeration deterministic and
  // independent of insertion order.
  using CenterMap = std::map<std::string, std::vector<uint32_t>>;
  std::map<std::tuple<std::string, std::string, std::string>, CenterMap> index;
  for (uint32_t i = 0; i < out.segments.size(); ++i) {
    const Segment &s = out.segments[i];
    const std::string group = within_speaker ? s.speaker_id : std::string();
    index[{group, s.trigram[0], s.trigram[2]}][s.trigram[1]].push_back(i);
  }

  for (const auto &[frame, centers] : index) {
    const auto &[group, left, right] = frame;
    for (const auto &[center_a, a_segments] : centers) {
      if (a_segments.size() < 2) continue;  // A and X must be distinct segments
      for (const auto &[center_b, b_segments] : centers) {
        if (center_b == center_a || b_segments.empty()) continue;
        const ContrastKey key{group, left, right, center_a, center_b};
        const uint64_t n_a = a_segments.size();
        const uint64_t n_b = b_segments.size();
        const uint64_t total = n_a * (n_a - 1) * n_b;

        const auto contrast_id = static_cast<uint32_t>(out.contrast_names.size());
        out.contrast_names.push_back(contrast_name(key));

        auto emit = [&](uint64_t linear) {
          // linear = (ordered A,X pair index) * n_b + b index
          const uint64_t pair = linear / n_b;
          const uint64_t b = linear % n_b;
          const uint64_t a = pair / (n_a - 1);
          uint64_t x = pair % (n_a - 1);
          if (x >= a) ++x;
          out.triples.push_back({a_segments[a], b_segments[b], a_segments[x],
                                 contrast_id});
        };

        if (total <= max_per_contrast) {
          for (uint64_t k = 0; k < total; ++k) emit(k);
        } else {
          // Contrast-local seed so sampling does not depend on enumeration
          // order of other contrasts.
          Rng rng(derive_seed(seed, contrast_name(key)));
          for (uint64_t k :
               sample_without_replacement(total, max_per_contrast, rng))
            emit(k);
        }
      }
    }
  }

  if (out.triples.empty())
    throw std::invalid_argument(
        "build_triples: no minimal pairs in the segment set");
  return out;
}

double abx_error_one(std::span<const int32_t> a, std::span<const int32_t> b,
                     std::span<const int32_t> x) {
  const double d_ax = normalized_distance(a, x, /*collapse=*/true);
  const double d_bx = normalized_distance(b, x, /*collapse=*/true);
  if (d_ax > d_bx) return 1.0;
  if (d_ax == d_bx) return 0.5;
  return 0.0;
}

AbxScore abx_score(const TripleSet &triples, unsigned jobs) {
  if (triples.triples.empty())
    throw std::invalid_argument("abx_score: empty triple set");

  // Collapse each segment once; the per-triple distances are computed on the
  // collapsed strings, which is equivalent to collapsing inside
  // abx_error_one.
  std::vector<SymbolString> collapsed(triples.segments.size());
  parallel_for(triples.segments.size(), jobs, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      collapsed[i] = collapse_repeats(triples.segments[i].code_slice);
  });

  std::vector<double> errors(triples.triples.size());
  parallel_for(triples.triples.size(), jobs, [&](size_t begin, size_t end) {
    std::vector<uint32_t> scratch;
    for (size_t k = begin; k < end; ++k) {
      const auto &t = triples.triples[k];
      const double d_ax =
          normalized_distance(collapsed[t.a], collapsed[t.x], false);
      const double d_bx =
          normalized_distance(collapsed[t.b], collapsed[t.x], false);
      errors[k] = d_ax > d_bx ? 1.0 : (d_ax == d_bx ? 0.5 : 0.0);
    }
  });

  AbxScore score;
  score.n_triples = triples.triples.size();

  std::vector<double> contrast_sum(triples.contrast_names.size(), 0.0);
  std::vector<uint64_t> contrast_count(triples.contrast_names.size(), 0);
  double micro_sum = 0.0;
  for (size_t k = 0; k < errors.size(); ++k) {
    micro_sum += errors[k];
    contrast_sum[triples.triples[k].contrast] += errors[k];
    ++contrast_count[triples.triples[k].contrast];
  }
  score.micro_error = micro_sum / static_cast<double>(errors.size());

  double macro_sum = 0.0;
  size_t used = 0;
  for (size_t c = 0; c < contrast_sum.size(); ++c) {
    if (contrast_count[c] == 0) continue;
    macro_sum += contrast_sum[c] / static_cast<double>(contrast_count[c]);
    ++used;
  }
  score.n_contrasts = used;
  score.macro_error = macro_sum / static_cast<double>(used);
  score.accuracy = 1.0 - score.macro_error;
  return score;
}

void write_triples(const std::string &path, const TripleSet &triples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  auto row = [&out, &triples](const std::string &contrast, char role,
                              uint32_t segment_index) {
    const Segment &s = triples.segments[segment_index];
    out << contrast << '\t' << role << '\t' << s.utterance_id << '\t'
        << s.start << '\t' << s.end << '\t' << s.trigram_name() << '\n';
  };
  for (const auto &t : triples.triples) {
    const std::string &contrast = triples.contrast_names[t.contrast];
    row(contrast, 'A', t.a);
    row(contrast, 'B', t.b);
    row(contrast, 'X', t.x);
  }
}

TripleSet read_triples(const std::string &path,
                       std::span<const CodeSequence> codes) {
  std::unordered_map<std::string, const CodeSequence *> by_id;
  for (const CodeSequence &seq : codes) by_id[seq.utterance_id] = &seq;

  const std::string text = read_text_file(path);
  std::vector<std::string> lines;
  {
    size_t pos = 0;
    while (pos < text.size()) {
      size_t nl = text.find('\n', pos);
      std::string line = nl == std::string::npos ? text.substr(pos)
                                                 : text.substr(pos, nl - pos);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(std::move(line));
      if (nl == std::string::npos) break;
      pos = nl + 1;
    }
  }
  if (lines.size() % 3 != 0)
    throw ParseError(path + ": triple rows must come in A/B/X groups of 3");

  TripleSet out;
  std::unordered_map<std::string, uint32_t> contrast_ids;

  auto parse_row = [&](const std::string &line, size_t line_no) {
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
      size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() != 6)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 6 tab-separated fields");
    return fields;
  };

  for (size_t i = 0; i < lines.size(); i += 3) {
    TripleSet::TripleRef ref;
    std::string contrast;
    const char roles[3] = {'A', 'B', 'X'};
    for (size_t r = 0; r < 3; ++r) {
      const size_t line_no = i + r + 1;
      const auto fields = parse_row(lines[i + r], line_no);
      if (r == 0)
        contrast = fields[0];
      else if (fields[0] != contrast)
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": contrast id differs within one triple");
      if (fields[1].size() != 1 || fields[1][0] != roles[r])
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": expected role " + std::string(1, roles[r]));
      auto it = by_id.find(fields[2]);
      if (it == by_id.end())
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": unknown utterance id \"" + fields[2] + "\"");
      const CodeSequence &seq = *it->second;
      const int64_t start = std::stoll(fields[3]);
      const int64_t end = std::stoll(fields[4]);
      if (start < 0 || start >= end ||
          end > static_cast<int64_t>(seq.codes.size()))
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": frame range outside utterance");
      Segment segment;
      segment.utterance_id = seq.utterance_id;
      segment.speaker_id = seq.speaker_id;
      segment.start = start;
      segment.end = end;
      segment.code_slice.assign(seq.codes.begin() + start,
                                seq.codes.begin() + end);
      // The trigram field is display metadata in this direction; keep it.
      const std::string &name = fields[5];
      size_t s1 = name.find(' ');
      size_t s2 = s1 == std::string::npos ? std::string::npos
                                          : name.find(' ', s1 + 1);
      if (s1 != std::string::npos && s2 != std::string::npos) {
        segment.trigram = {name.substr(0, s1), name.substr(s1 + 1, s2 - s1 - 1),
                           name.substr(s2 + 1)};
      } else {
        segment.trigram = {name, "", ""};
      }
      const auto segment_index = static_cast<uint32_t>(out.segments.size());
      out.segments.push_back(std::move(segment));
      if (r == 0) ref.a = segment_index;
      if (r == 1) ref.b = segment_index;
      if (r == 2) ref.x = segment_index;
    }
    auto [it, inserted] =
        contrast_ids.emplace(contrast, static_cast<uint32_t>(out.contrast_names.size()));
    if (inserted) out.contrast_names.push_back(contrast);
    ref.contrast = it->second;
    out.triples.push_back(ref);
  }
  if (out.triples.empty()) throw ParseError(path + ": no triples");
  return out;
}

}  // namespace codeprobe
