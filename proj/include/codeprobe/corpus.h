// codeprobe/corpus.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_CORPUS_H_
#define CODEPROBE_CORPUS_H_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "codeprobe/common.h"

namespace codeprobe {

constexpr const char *kDefaultSilenceLabel = "SIL";

// One utterance worth of frame-wise discrete codes.
struct CodeSequence {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<int32_t> codes;  // each in [0, codebook_size)
  int32_t codebook_size = 0;
};

// Half-open [start, end) in code-frame units.
struct PhonemeInterval {
  std::string label;
  int64_t start = 0;
  int64_t end = 0;
};

struct AlignedUtterance {
  CodeSequence codes;
  std::vector<PhonemeInterval> intervals;  // sorted, non-overlapping
};

// Codes file: one utterance per line,
//   utterance_id <TAB> speaker_id <TAB> space-separated code indices
// LF and CRLF are accepted; CR-only files are rejected. Malformed lines
// raise ParseError naming the line number.
std::vector<CodeSequence> load_codes(const std::string &path,
                                     int32_t codebook_size);
void write_codes(const std::string &path,
                 std::span<const CodeSequence> sequences);

// Alignment file: one interval per line,
//   utterance_id <TAB> phoneme_label <TAB> start_frame <TAB> end_frame
// Intervals arrive in raw-feature frames when frame_factor > 1 and are
// rescaled to code frames (floor on start, ceil on end); overlaps created by
// the rescale are clamped forward and emptied intervals dropped.
using AlignmentSet = std::unordered_map<std::string, std::vector<PhonemeInterval>>;
AlignmentSet load_alignments(const std::string &path, int64_t frame_factor = 1);
void write_alignments(const std::string &path,
                      std::span<const AlignedUtterance> corpus);

struct JoinOptions {
  // When true, utterances whose alignment violates the frame range are
  // logged and dropped instead of failing the join.
  bool skip_bad = false;
};

// Joins code sequences with their alignments. Utterances with no alignment
// entries are kept (all frames fall to the silence label downstream).
std::vector<AlignedUtterance> join_corpus(std::vector<CodeSequence> codes,
                                          const AlignmentSet &alignments,
                                          const JoinOptions &options = {});

// One label per frame: the covering interval's label, or silence_label for
// uncovered frames. Output length equals codes.size().
std::vector<std::string> frame_labels(const AlignedUtterance &utterance,
                                      const std::string &silence_label);

// Deterministic utterance-level split; half sizes differ by at most one
// (train gets the extra element). Requires at least two elements.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> split_halves(std::span<const T> corpus,
                                                       uint64_t seed) {
  if (corpus.size() < 2)
    throw std::invalid_argument("split_halves: need at least 2 utterances");
  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  const size_t train_size = (corpus.size() + 1) / 2;
  std::pair<std::vector<T>, std::vector<T>> halves;
  halves.first.reserve(train_size);
  halves.second.reserve(corpus.size() - train_size);
  for (size_t i = 0; i < order.size(); ++i) {
    (i < train_size ? halves.first : halves.second).push_back(corpus[order[i]]);
  }
  return halves;
}

// Stable string <-> dense id mapping, shared by every consumer that needs to
// compare label strings as integers.
class LabelInterner {
 public:
  int32_t id(const std::string &label);
  // Lookup without inserting; returns -1 when unknown.
  int32_t find(const std::string &label) const;
  const std::string &name(int32_t id) const;
  size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, int32_t> ids_;
  std::vector<std::string> names_;
};

}  // namespace codeprobe

#endif  // CODEPROBE_CORPUS_H_
