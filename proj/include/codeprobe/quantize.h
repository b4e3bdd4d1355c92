// codeprobe/quantize.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_QUANTIZE_H_
#define CODEPROBE_QUANTIZE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "codeprobe/corpus.h"

namespace codeprobe {

struct Codebook {
  int32_t size = 0;       // K
  int32_t dimension = 0;  // d
  std::vector<double> prototypes;  // row-major, K x d

  std::span<const double> prototype(int32_t index) const {
    return {prototypes.data() + static_cast<size_t>(index) * dimension,
            static_cast<size_t>(dimension)};
  }
};

struct FeatureSequence {
  std::string utterance_id;
  std::string speaker_id;
  int32_t dimension = 0;
  std::vector<double> frames;  // row-major, n x d

  size_t n_frames() const {
    return dimension == 0 ? 0 : frames.size() / static_cast<size_t>(dimension);
  }
  std::span<const double> frame(size_t t) const {
    return {frames.data() + t * static_cast<size_t>(dimension),
            static_cast<size_t>(dimension)};
  }
};

// Codebook file: header line "K d", then K lines of d decimals. Warns when
// two prototypes are bitwise identical.
Codebook load_codebook(const std::string &path);

// Feature file: per utterance a "utterance_id <TAB> speaker_id" header, one
// frame of d decimals per line, utterances separated by blank lines.
std::vector<FeatureSequence> load_features(const std::string &path);

// Nearest prototype by squared Euclidean distance, lowest index on exact
// ties. Length-preserving; throws on dimension mismatch.
CodeSequence quantize(const FeatureSequence &features, const Codebook &codebook,
                      unsigned jobs = 1);

}  // namespace codeprobe

#endif  // CODEPROBE_QUANTIZE_H_
