// codeprobe/quantize.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/quantize.h"

#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace codeprobe {

namespace {

std::vector<double> parse_decimals(const std::string &line,
                                   const std::string &context) {
  std::vector<double> values;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    try {
      size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception &) {
      throw ParseError(context + ": non-numeric token \"" + token + "\"");
    }
  }
  return values;
}

std::vector<std::string> logical_lines(const std::string &text,
                                       const std::string &path) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = nl == std::string::npos ? text.substr(pos)
                                               : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find('\r') != std::string::npos)
      throw ParseError(path + ": CR-only line endings are not supported");
    lines.push_back(std::move(line));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

Codebook load_codebook(const std::string &path) {
  const auto lines = logical_lines(read_text_file(path), path);
  size_t row = 0;
  while (row < lines.size() && lines[row].empty()) ++row;
  if (row == lines.size()) throw ParseError(path + ": empty codebook file");

  const auto header = parse_decimals(lines[row], path + ":" + std::to_string(row + 1));
  if (header.size() != 2 || header[0] < 1 || header[1] < 1 ||
      header[0] != static_cast<double>(static_cast<int64_t>(header[0])) ||
      header[1] != static_cast<double>(static_cast<int64_t>(header[1])))
    throw ParseError(path + ": header must be \"K d\" with positive integers");

  Codebook codebook;
  codebook.size = static_cast<int32_t>(header[0]);
  codebook.dimension = static_cast<int32_t>(header[1]);
  codebook.prototypes.reserve(static_cast<size_t>(codebook.size) *
                              codebook.dimension);
  int32_t parsed = 0;
  for (++row; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const std::string ctx = path + ":" + std::to_string(row + 1);
    const auto values = parse_decimals(lines[row], ctx);
    if (static_cast<int32_t>(values.size()) != codebook.dimension)
      throw ParseError(ctx + ": expected " + std::to_string(codebook.dimension) +
                       " values, got " + std::to_string(values.size()));
    codebook.prototypes.insert(codebook.prototypes.end(), values.begin(),
                               values.end());
    ++parsed;
  }
  if (parsed != codebook.size)
    throw ParseError(path + ": expected " + std::to_string(codebook.size) +
                     " prototypes, got " + std::to_string(parsed));

  for (int32_t i = 0; i < codebook.size; ++i) {
    for (int32_t j = i + 1; j < codebook.size; ++j) {
      if (std::memcmp(codebook.prototype(i).data(), codebook.prototype(j).data(),
                      sizeof(double) * static_cast<size_t>(codebook.dimension)) == 0) {
        log_warn(path + ": prototypes " + std::to_string(i) + " and " +
                 std::to_string(j) + " are identical; ties resolve to " +
                 std::to_string(i));
      }
    }
  }
  return codebook;
}

std::vector<FeatureSequence> load_features(const std::string &path) {
  const auto lines = logical_lines(read_text_file(path), path);
  std::vector<FeatureSequence> sequences;
  FeatureSequence current;
  bool in_block = false;

  auto flush = [&sequences, &current, &in_block, &path]() {
    if (!in_block) return;
    if (current.n_frames() == 0)
      throw ParseError(path + ": utterance \"" + current.utterance_id +
                       "\" has no frames");
    sequences.push_back(std::move(current));
    current = FeatureSequence();
    in_block = false;
  };

  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string &line = lines[i];
    if (line.empty()) {
      flush();
      continue;
    }
    const std::string ctx = path + ":" + std::to_string(i + 1);
    if (!in_block) {
      const size_t tab = line.find('\t');
      if (tab == std::string::npos)
        throw ParseError(ctx + ": expected \"utterance_id<TAB>speaker_id\" header");
      current.utterance_id = line.substr(0, tab);
      current.speaker_id = line.substr(tab + 1);
      if (current.utterance_id.empty() || current.speaker_id.empty())
        throw ParseError(ctx + ": empty utterance or speaker id");
      in_block = true;
      continue;
    }
    const auto values = parse_decimals(line, ctx);
    if (values.empty()) throw ParseError(ctx + ": empty frame");
    if (current.dimension == 0)
      current.dimension = static_cast<int32_t>(values.size());
    else if (static_cast<int32_t>(values.size()) != current.dimension)
      throw ParseError(ctx + ": frame dimension " + std::to_string(values.size()) +
                       " != " + std::to_string(current.dimension));
    current.frames.insert(current.frames.end(), values.begin(), values.end());
  }
  flush();
  if (sequences.empty()) throw ParseError(path + ": no utterances");
  return sequences;
}

CodeSequence quantize(const FeatureSequence &features, const Codebook &codebook,
                      unsigned jobs) {
  if (features.dimension != codebook.dimension)
    throw std::invalid_argument(
        "quantize: dimension mismatch (features d=" +
        std::to_string(features.dimension) + ", codebook d=" +
        std::to_string(codebook.dimension) + ")");

  CodeSequence out;
  out.utterance_id = features.utterance_id;
  out.speaker_id = features.speaker_id;
  out.codebook_size = codebook.size;
  out.codes.resize(features.n_frames());

  const auto d = static_cast<size_t>(codebook.dimension);
  parallel_for(features.n_frames(), jobs, [&](size_t begin, size_t end) {
    for (size_t t = begin; t < end; ++t) {
      const double *frame = features.frames.data() + t * d;
      int32_t best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int32_t k = 0; k < codebook.size; ++k) {
        const double *proto = codebook.prototypes.data() + static_cast<size_t>(k) * d;
        double dist = 0.0;
        for (size_t i = 0; i < d; ++i) {
          const double diff = frame[i] - proto[i];
          dist += diff * diff;
        }
        if (dist < best_dist) {  // strict: exact ties keep the lowest index
          best_dist = dist;
          best = k;
        }
      }
      out.codes[t] = best;
    }
  });
  return out;
}

}  // namespace codeprobe
