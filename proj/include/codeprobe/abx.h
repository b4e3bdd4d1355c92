// codeprobe/abx.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_ABX_H_
#define CODEPROBE_ABX_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "codeprobe/corpus.h"
#include "codeprobe/editdist.h"

namespace codeprobe {

// A phoneme-trigram stimulus: three consecutive non-silence intervals plus
// the code frames they span.
struct Segment {
  std::string utterance_id;
  std::string speaker_id;
  std::array<std::string, 3> trigram;  // left, center, right
  int64_t start = 0;                   // code frames, half-open
  int64_t end = 0;
  SymbolString code_slice;

  std::string trigram_name() const {
    return trigram[0] + " " + trigram[1] + " " + trigram[2];
  }
};

// Minimal-pair triples grouped by category contrast. A triple references
// segments by index; A and X share a trigram, B differs in the center
// phoneme only.
struct TripleSet {
  struct TripleRef {
    uint32_t a = 0;
    uint32_t b = 0;
    uint32_t x = 0;
    uint32_t contrast = 0;
  };

  std::vector<Segment> segments;
  std::vector<std::string> contrast_names;
  std::vector<TripleRef> triples;

  size_t size() const { return triples.size(); }
};

// Greedy non-overlapping trigram extraction: per utterance, consecutive
// non-silence intervals are grouped 1-3, 4-6, ... from the start; a trailing
// group of fewer than three is dropped. The code slice runs from the first
// interval's start to the third's end.
std::vector<Segment> extract_segments(
    std::span<const AlignedUtterance> corpus,
    const std::string &silence_label = kDefaultSilenceLabel);

// Enumerates, for every ordered contrast (T_A, T_B) differing only in the
// center phoneme, all triples with A, X distinct segments of T_A and B from
// T_B, capping each contrast at max_per_contrast via seeded sampling.
// Throws "no minimal pairs" when the corpus affords no contrast.
TripleSet build_triples(std::span<const Segment> segments,
                        uint64_t max_per_contrast, uint64_t seed,
                        bool within_speaker = false);

// Discriminability charge for one triple: 1 when X is closer to B, 0.5 on
// ties, 0 otherwise. Distances are collapse-then-normalize edit distances.
double abx_error_one(std::span<const int32_t> a, std::span<const int32_t> b,
                     std::span<const int32_t> x);

struct AbxScore {
  double macro_error = 0.0;  // mean per-contrast error, averaged over contrasts
  double micro_error = 0.0;  // plain mean over triples
  double accuracy = 0.0;     // 1 - macro_error
  size_t n_triples = 0;
  size_t n_contrasts = 0;
};

AbxScore abx_score(const TripleSet &triples, unsigned jobs = 1);

// Triples file, one row per stimulus with A, B, X rows consecutive:
//   contrast_id <TAB> role <TAB> utterance_id <TAB> start <TAB> end <TAB> trigram
void write_triples(const std::string &path, const TripleSet &triples);

// Reads a triples file back and resolves code slices against a corpus of
// code sequences (the "slice" regime slices utterance encodings; the
// "segment" regime points at per-segment encodings covering their full
// length).
TripleSet read_triples(const std::string &path,
                       std::span<const CodeSequence> codes);

}  // namespace codeprobe

#endif  // CODEPROBE_ABX_H_
