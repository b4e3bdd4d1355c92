// codeprobe/synth.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_SYNTH_H_
#define CODEPROBE_SYNTH_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "codeprobe/corpus.h"

namespace codeprobe {

// Synthetic phoneme -> code channel. Each frame draws its code from a
// phoneme-specific block with probability `purity`, otherwise from a
// speaker-specific block with probability `speaker_leakage`, otherwise
// uniformly over the whole codebook.
struct ChannelConfig {
  int32_t codebook_size = 64;
  int32_t n_phonemes = 39;
  int32_t n_speakers = 32;
  int32_t n_utterances = 100;
  double purity = 0.75;           // alpha in [0, 1]
  double speaker_leakage = 0.0;   // beta in [0, 1]
  std::pair<int32_t, int32_t> frames_per_phoneme = {2, 8};
  std::pair<int32_t, int32_t> utterance_length = {8, 30};  // phonemes
  uint64_t seed = 0;
};

// Ground-truth emission blocks, half-open code ranges per phoneme/speaker.
struct ChannelTables {
  std::vector<std::pair<int32_t, int32_t>> phoneme_blocks;
  std::vector<std::pair<int32_t, int32_t>> speaker_blocks;
};

struct SynthCorpus {
  std::vector<AlignedUtterance> utterances;
  ChannelTables tables;
};

// Validates the config; throws std::invalid_argument describing the first
// inconsistency (e.g. a codebook smaller than the phoneme inventory).
void validate(const ChannelConfig &config);

// Deterministic for a fixed seed; utterances are generated from per-index
// derived seeds so output is independent of scheduling.
SynthCorpus generate(const ChannelConfig &config, unsigned jobs = 1);

// Writes codes.tsv / alignments.tsv in the corpus file formats plus a
// channel.json sidecar with the config and ground-truth tables. Returns the
// three paths written.
std::vector<std::string> write_synth_corpus(const std::string &directory,
                                            const ChannelConfig &config,
                                            const SynthCorpus &corpus);

}  // namespace codeprobe

#endif  // CODEPROBE_SYNTH_H_
