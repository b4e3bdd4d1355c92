// codeprobe/editdist.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_EDITDIST_H_
#define CODEPROBE_EDITDIST_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "codeprobe/common.h"

namespace codeprobe {

// Removes adjacent duplicate symbols; order preserved, idempotent.
SymbolString collapse_repeats(std::span<const int32_t> s);

// Plain unit-cost Levenshtein distance (insert/delete/substitute).
size_t levenshtein(std::span<const int32_t> a, std::span<const int32_t> b);

// levenshtein(a', b') / max(|a'|, |b'|) where a', b' are the inputs after
// optional repetition collapsing. Throws if both strings are empty after
// collapsing ("degenerate pair").
double normalized_distance(std::span<const int32_t> a,
                           std::span<const int32_t> b, bool collapse);

// Pair selection for bulk distance computation. max_pairs >= n(n-1)/2 keeps
// every pair; otherwise max_pairs are sampled uniformly without replacement
// with the given seed. Either way the emitted pair order is the ascending
// row-major order over (i, j), i < j, so output never depends on scheduling.
struct PairSampler {
  uint64_t max_pairs = UINT64_MAX;
  uint64_t seed = 0;
};

struct DistancePairs {
  std::vector<std::pair<uint32_t, uint32_t>> pair_indices;  // i < j
  std::vector<double> distances_a;
  std::vector<double> distances_b;

  size_t size() const { return pair_indices.size(); }
};

// Normalized distances for the selected pairs in two index-aligned stimulus
// lists. Inputs are compared as given (collapse upstream if wanted).
DistancePairs pairwise_distances(std::span<const SymbolString> items_a,
                                 std::span<const SymbolString> items_b,
                                 const PairSampler &sampler,
                                 unsigned jobs = 1);

}  // namespace codeprobe

#endif  // CODEPROBE_EDITDIST_H_
