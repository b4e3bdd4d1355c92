// codeprobe/synth.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/synth.h"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace codeprobe {

namespace {

std::vector<std::pair<int32_t, int32_t>> even_blocks(int32_t codebook_size,
                                                     int32_t groups) {
  // Partition [0, K) into `groups` contiguous blocks as evenly as possible.
  std::vector<std::pair<int32_t, int32_t>> blocks;
  blocks.reserve(static_cast<size_t>(groups));
  for (int32_t g = 0; g < groups; ++g) {
    const auto lo = static_cast<int32_t>(
        static_cast<int64_t>(g) * codebook_size / groups);
    const auto hi = static_cast<int32_t>(
        static_cast<int64_t>(g + 1) * codebook_size / groups);
    blocks.emplace_back(lo, hi);
  }
  return blocks;
}

std::string zero_padded(const char *prefix, int32_t value, int width) {
  std::string digits = std::to_string(value);
  std::string out(prefix);
  out.append(static_cast<size_t>(width) > digits.size()
                 ? static_cast<size_t>(width) - digits.size()
                 : 0,
             '0');
  out += digits;
  return out;
}

}  // namespace

void validate(const ChannelConfig &config) {
  auto fail = [](const std::string &what) {
    throw std::invalid_argument("ChannelConfig: " + what);
  };
  if (config.codebook_size < 1) fail("codebook_size must be positive");
  if (config.n_phonemes < 2) fail("need at least 2 phonemes");
  if (config.n_speakers < 1) fail("need at least 1 speaker");
  if (config.n_utterances < 1) fail("need at least 1 utterance");
  if (config.purity < 0.0 || config.purity > 1.0) fail("purity outside [0, 1]");
  if (config.speaker_leakage < 0.0 || config.speaker_leakage > 1.0)
    fail("speaker_leakage outside [0, 1]");
  if (config.frames_per_phoneme.first < 1 ||
      config.frames_per_phoneme.first > config.frames_per_phoneme.second)
    fail("frames_per_phoneme range invalid");
  if (config.utterance_length.first < 1 ||
      config.utterance_length.first > config.utterance_length.second)
    fail("utterance_length range invalid");
  if (config.codebook_size < config.n_phonemes)
    fail("codebook_size must be >= n_phonemes so phoneme blocks are non-empty");
  if (config.speaker_leakage > 0.0 && config.codebook_size < config.n_speakers)
    fail("codebook_size must be >= n_speakers when speaker_leakage > 0");
}

SynthCorpus generate(const ChannelConfig &config, unsigned jobs) {
  validate(config);

  SynthCorpus out;
  out.tables.phoneme_blocks = even_blocks(config.codebook_size, config.n_phonemes);
  out.tables.speaker_blocks = even_blocks(config.codebook_size, config.n_speakers);
  out.utterances.resize(static_cast<size_t>(config.n_utterances));

  const auto &phoneme_blocks = out.tables.phoneme_blocks;
  const auto &speaker_blocks = out.tables.speaker_blocks;

  parallel_for(out.utterances.size(), jobs, [&](size_t begin, size_t end) {
    for (size_t u = begin; u < end; ++u) {
      Rng rng(derive_seed(config.seed, static_cast<uint64_t>(u)));
      AlignedUtterance utterance;
      const auto speaker =
          static_cast<int32_t>(rng.below(static_cast<uint64_t>(config.n_speakers)));
      utterance.codes.utterance_id = zero_padded("u", static_cast<int32_t>(u), 6);
      utterance.codes.speaker_id = zero_padded("s", speaker, 3);
      utterance.codes.codebook_size = config.codebook_size;

      const auto n_phones = static_cast<int32_t>(rng.range_inclusive(
          config.utterance_length.first, config.utterance_length.second));
      // Phonemes are uniform with no adjacent repeats, so that a perfectly
      // pure channel collapses to exactly the reference string.
      std::vector<int32_t> phones(static_cast<size_t>(n_phones));
      for (int32_t p = 0; p < n_phones; ++p) {
        if (p == 0) {
          phones[p] = static_cast<int32_t>(
              rng.below(static_cast<uint64_t>(config.n_phonemes)));
        } else {
          auto draw = static_cast<int32_t>(
              rng.below(static_cast<uint64_t>(config.n_phonemes - 1)));
          if (draw >= phones[p - 1]) ++draw;
          phones[p] = draw;
        }
      }

      int64_t frame = 0;
      for (int32_t p = 0; p < n_phones; ++p) {
        const auto run = static_cast<int32_t>(rng.range_inclusive(
            config.frames_per_phoneme.first, config.frames_per_phoneme.second));
        PhonemeInterval interval;
        interval.label = zero_padded("p", phones[p], 2);
        interval.start = frame;
        interval.end = frame + run;
        for (int32_t f = 0; f < run; ++f) {
          const double roll = rng.unit();
          int32_t code;
          if (roll < config.purity) {
            const auto &block = phoneme_blocks[static_cast<size_t>(phones[p])];
            code = block.first +
                   static_cast<int32_t>(rng.below(
                       static_cast<uint64_t>(block.second - block.first)));
          } else if (roll < config.purity +
                                config.speaker_leakage * (1.0 - config.purity)) {
            const auto &block = speaker_blocks[static_cast<size_t>(speaker)];
            code = block.first +
                   static_cast<int32_t>(rng.below(
                       static_cast<uint64_t>(block.second - block.first)));
          } else {
            code = static_cast<int32_t>(
                rng.below(static_cast<uint64_t>(config.codebook_size)));
          }
          utterance.codes.codes.push_back(code);
        }
        utterance.intervals.push_back(std::move(interval));
        frame += run;
      }
      out.utterances[u] = std::move(utterance);
    }
  });
  return out;
}

std::vector<std::string> write_synth_corpus(const std::string &directory,
                                            const ChannelConfig &config,
                                            const SynthCorpus &corpus) {
  std::filesystem::create_directories(directory);
  const std::string codes_path = directory + "/codes.tsv";
  const std::string alignments_path = directory + "/alignments.tsv";
  const std::string channel_path = directory + "/channel.json";

  std::vector<CodeSequence> codes;
  codes.reserve(corpus.utterances.size());
  for (const AlignedUtterance &utterance : corpus.utterances)
    codes.push_back(utterance.codes);
  write_codes(codes_path, codes);
  write_alignments(alignments_path, corpus.utterances);

  nlohmann::json j;
  j["config"] = {{"codebook_size", config.codebook_size},
                 {"n_phonemes", config.n_phonemes},
                 {"n_speakers", config.n_speakers},
                 {"n_utterances", config.n_utterances},
                 {"purity", config.purity},
                 {"speaker_leakage", config.speaker_leakage},
                 {"frames_per_phoneme",
                  {config.frames_per_phoneme.first, config.frames_per_phoneme.second}},
                 {"utterance_length",
                  {config.utterance_length.first, config.utterance_length.second}},
                 {"seed", config.seed}};
  j["phoneme_blocks"] = corpus.tables.phoneme_blocks;
  j["speaker_blocks"] = corpus.tables.speaker_blocks;
  std::ofstream out(channel_path, std::ios::binary);
  if (!out) throw ParseError(channel_path + ": cannot open file for writing");
  out << j.dump(2) << "\n";

  return {codes_path, alignments_path, channel_path};
}

}  // namespace codeprobe
