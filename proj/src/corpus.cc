// codeprobe/corpus.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace codeprobe {

namespace {

// Splits file content into lines. Accepts LF and CRLF; rejects CR-only
// endings (classic-Mac files silently concatenate records otherwise).
std::vector<std::string_view> split_lines(std::string_view text,
                                          const std::string &path) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find('\r') != std::string_view::npos)
      throw ParseError(path + ": CR-only line endings are not supported");
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (true) {
    size_t next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      fields.push_back(s.substr(pos));
      break;
    }
    fields.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

int64_t parse_int(std::string_view token, const std::string &context) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(context + ": non-integer token \"" + std::string(token) + "\"");
  return value;
}

std::string line_context(const std::string &path, size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

}  // namespace

std::vector<CodeSequence> load_codes(const std::string &path,
                                     int32_t codebook_size) {
  if (codebook_size <= 0)
    throw std::invalid_argument("load_codes: codebook_size must be positive");
  const std::string text = read_text_file(path);
  const auto lines = split_lines(text, path);

  std::vector<CodeSequence> sequences;
  std::unordered_set<std::string> seen_ids;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    const std::string ctx = line_context(path, i + 1);
    auto fields = split_on(line, '\t');
    if (fields.size() != 3)
      throw ParseError(ctx + ": expected 3 tab-separated fields, got " +
                       std::to_string(fields.size()));
    CodeSequence seq;
    seq.utterance_id = std::string(fields[0]);
    seq.speaker_id = std::string(fields[1]);
    seq.codebook_size = codebook_size;
    if (seq.utterance_id.empty())
      throw ParseError(ctx + ": empty utterance id");
    if (!seen_ids.insert(seq.utterance_id).second)
      throw ParseError(ctx + ": duplicate utterance id \"" + seq.utterance_id + "\"");
    for (std::string_view token : split_on(fields[2], ' ')) {
      if (token.empty()) continue;
      int64_t code = parse_int(token, ctx);
      if (code < 0 || code >= codebook_size)
        throw ParseError(ctx + ": code out of range (" + std::to_string(code) +
                         " not in [0, " + std::to_string(codebook_size) + "))");
      seq.codes.push_back(static_cast<int32_t>(code));
    }
    if (seq.codes.empty())
      throw ParseError(ctx + ": empty code list");
    sequences.push_back(std::move(seq));
  }
  return sequences;
}

void write_codes(const std::string &path,
                 std::span<const CodeSequence> sequences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  for (const CodeSequence &seq : sequences) {
    out << seq.utterance_id << '\t' << seq.speaker_id << '\t';
    for (size_t i = 0; i < seq.codes.size(); ++i) {
      if (i) out << ' ';
      out << seq.codes[i];
    }
    out << '\n';
  }
}

AlignmentSet load_alignments(const std::string &path, int64_t frame_factor) {
  if (frame_factor < 1)
    throw std::invalid_argument("load_alignments: frame_factor must be >= 1");
  const std::string text = read_text_file(path);
  const auto lines = split_lines(text, path);

  AlignmentSet alignments;
  for (size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    const std::string ctx = line_context(path, i + 1);
    auto fields = split_on(line, '\t');
    if (fields.size() != 4)
      throw ParseError(ctx + ": expected 4 tab-separated fields, got " +
                       std::to_string(fields.size()));
    PhonemeInterval interval;
    interval.label = std::string(fields[1]);
    interval.start = parse_int(fields[2], ctx);
    interval.end = parse_int(fields[3], ctx);
    if (interval.label.empty()) throw ParseError(ctx + ": empty phoneme label");
    if (interval.start < 0 || interval.start >= interval.end)
      throw ParseError(ctx + ": interval must satisfy 0 <= start < end");
    if (frame_factor > 1) {
      interval.start = interval.start / frame_factor;
      interval.end = (interval.end + frame_factor - 1) / frame_factor;
    }
    alignments[std::string(fields[0])].push_back(std::move(interval));
  }

  for (auto &[utt, intervals] : alignments) {
    std::stable_sort(intervals.begin(), intervals.end(),
                     [](const PhonemeInterval &a, const PhonemeInterval &b) {
                       return a.start < b.start;
                     });
    // Frame-factor rescaling can introduce overlaps; clamp forward and drop
    // intervals emptied by the clamp.
    std::vector<PhonemeInterval> cleaned;
    cleaned.reserve(intervals.size());
    int64_t prev_end = 0;
    for (PhonemeInterval &interval : intervals) {
      if (interval.start < prev_end) {
        if (frame_factor == 1)
          throw ParseError(path + ": overlapping intervals in utterance \"" +
                           utt + "\"");
        interval.start = prev_end;
      }
      if (interval.start >= interval.end) continue;
      prev_end = interval.end;
      cleaned.push_back(std::move(interval));
    }
    intervals = std::move(cleaned);
  }
  return alignments;
}

void write_alignments(const std::string &path,
                      std::span<const AlignedUtterance> corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  for (const AlignedUtterance &utterance : corpus) {
    for (const PhonemeInterval &interval : utterance.intervals) {
      out << utterance.codes.utterance_id << '\t' << interval.label << '\t'
          << interval.start << '\t' << interval.end << '\n';
    }
  }
}

std::vector<AlignedUtterance> join_corpus(std::vector<CodeSequence> codes,
                                          const AlignmentSet &alignments,
                                          const JoinOptions &options) {
  std::vector<AlignedUtterance> corpus;
  corpus.reserve(codes.size());
  size_t dropped = 0;
  for (CodeSequence &seq : codes) {
    AlignedUtterance utterance;
    auto it = alignments.find(seq.utterance_id);
    if (it != alignments.end()) utterance.intervals = it->second;
    const auto frames = static_cast<int64_t>(seq.codes.size());
    bool bad = false;
    for (const PhonemeInterval &interval : utterance.intervals) {
      if (interval.end > frames) {
        if (!options.skip_bad)
          throw ParseError("utterance \"" + seq.utterance_id + "\": interval [" +
                           std::to_string(interval.start) + ", " +
                           std::to_string(interval.end) + ") exceeds " +
                           std::to_string(frames) + " code frames");
        bad = true;
        break;
      }
    }
    if (bad) {
      ++dropped;
      continue;
    }
    utterance.codes = std::move(seq);
    corpus.push_back(std::move(utterance));
  }
  if (dropped > 0)
    log_warn("join_corpus: dropped " + std::to_string(dropped) +
             " utterance(s) with out-of-range alignments");
  return corpus;
}

std::vector<std::string> frame_labels(const AlignedUtterance &utterance,
                                      const std::string &silence_label) {
  std::vector<std::string> labels(utterance.codes.codes.size(), silence_label);
  for (const PhonemeInterval &interval : utterance.intervals) {
    if (interval.start < 0 ||
        interval.end > static_cast<int64_t>(labels.size()))
      throw std::invalid_argument("frame_labels: interval outside code range");
    for (int64_t t = interval.start; t < interval.end; ++t)
      labels[static_cast<size_t>(t)] = interval.label;
  }
  return labels;
}

int32_t LabelInterner::id(const std::string &label) {
  auto it = ids_.find(label);
  if (it != ids_.end()) return it->second;
  const auto new_id = static_cast<int32_t>(names_.size());
  ids_.emplace(label, new_id);
  names_.push_back(label);
  return new_id;
}

int32_t LabelInterner::find(const std::string &label) const {
  auto it = ids_.find(label);
  return it == ids_.end() ? -1 : it->second;
}

const std::string &LabelInterner::name(int32_t id) const {
  return names_.at(static_cast<size_t>(id));
}

}  // namespace codeprobe
