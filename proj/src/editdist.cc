// codeprobe/editdist.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/editdist.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codeprobe {

SymbolString collapse_repeats(std::span<const int32_t> s) {
  SymbolString out;
  out.reserve(s.size());
  for (int32_t symbol : s) {
    if (out.empty() || out.back() != symbol) out.push_back(symbol);
  }
  return out;
}

namespace {

// Two-row DP over uint32 cells; `row` must hold b.size() + 1 entries. Kept
// out-of-line from the public entry point so bulk callers can reuse scratch.
size_t levenshtein_with_scratch(std::span<const int32_t> a,
                                std::span<const int32_t> b,
                                std::vector<uint32_t> &row) {
  const size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  row.resize(m + 1);
  for (size_t j = 0; j <= m; ++j) row[j] = static_cast<uint32_t>(j);
  for (size_t i = 1; i <= n; ++i) {
    uint32_t diag = row[0];
    row[0] = static_cast<uint32_t>(i);
    const int32_t ai = a[i - 1];
    for (size_t j = 1; j <= m; ++j) {
      const uint32_t above = row[j];
      uint32_t cur = std::min(above, row[j - 1]) + 1;
      const uint32_t subst = diag + (ai != b[j - 1] ? 1u : 0u);
      cur = std::min(cur, subst);
      diag = above;
      row[j] = cur;
    }
  }
  return row[m];
}

double normalized_from_collapsed(std::span<const int32_t> a,
                                 std::span<const int32_t> b,
                                 std::vector<uint32_t> &row) {
  const size_t longer = std::max(a.size(), b.size());
  if (longer == 0)
    throw std::invalid_argument(
        "normalized_distance: degenerate pair (both strings empty)");
  return static_cast<double>(levenshtein_with_scratch(a, b, row)) /
         static_cast<double>(longer);
}

// Row-major linearization of pairs (i, j), i < j, over n items: row i starts
// at offset i*n - i*(i+1)/2 - i. Inverse via the quadratic formula with an
// integer fix-up.
std::pair<uint32_t, uint32_t> pair_from_linear(uint64_t k, uint64_t n) {
  double nf = static_cast<double>(n);
  double approx = nf - 0.5 -
                  std::sqrt((nf - 0.5) * (nf - 0.5) - 2.0 * static_cast<double>(k));
  auto i = static_cast<uint64_t>(std::max(0.0, approx));
  auto row_start = [n](uint64_t r) { return r * n - r - r * (r - 1) / 2; };
  while (i + 1 < n && row_start(i + 1) <= k) ++i;
  while (i > 0 && row_start(i) > k) --i;
  const uint64_t j = i + 1 + (k - row_start(i));
  return {static_cast<uint32_t>(i), static_cast<uint32_t>(j)};
}

}  // namespace

size_t levenshtein(std::span<const int32_t> a, std::span<const int32_t> b) {
  std::vector<uint32_t> row;
  return levenshtein_with_scratch(a, b, row);
}

double normalized_distance(std::span<const int32_t> a,
                           std::span<const int32_t> b, bool collapse) {
  std::vector<uint32_t> row;
  if (!collapse) return normalized_from_collapsed(a, b, row);
  const SymbolString ca = collapse_repeats(a);
  const SymbolString cb = collapse_repeats(b);
  return normalized_from_collapsed(ca, cb, row);
}

DistancePairs pairwise_distances(std::span<const SymbolString> items_a,
                                 std::span<const SymbolString> items_b,
                                 const PairSampler &sampler, unsigned jobs) {
  const uint64_t n = items_a.size();
  if (items_b.size() != n)
    throw std::invalid_argument("pairwise_distances: list lengths differ");
  if (n < 2)
    throw std::invalid_argument("pairwise_distances: need at least 2 stimuli");

  const uint64_t total = n * (n - 1) / 2;
  DistancePairs pairs;
  if (sampler.max_pairs >= total) {
    pairs.pair_indices.reserve(total);
    for (uint32_t i = 0; i + 1 < n; ++i)
      for (uint32_t j = i + 1; j < n; ++j) pairs.pair_indices.emplace_back(i, j);
  } else {
    Rng rng(sampler.seed);
    const auto ks = sample_without_replacement(total, sampler.max_pairs, rng);
    pairs.pair_indices.reserve(ks.size());
    for (uint64_t k : ks) pairs.pair_indices.push_back(pair_from_linear(k, n));
  }

  const size_t count = pairs.pair_indices.size();
  pairs.distances_a.resize(count);
  pairs.distances_b.resize(count);
  parallel_for(count, jobs, [&](size_t begin, size_t end) {
    std::vector<uint32_t> row;
    for (size_t k = begin; k < end; ++k) {
      const auto [i, j] = pairs.pair_indices[k];
      pairs.distances_a[k] =
          normalized_from_collapsed(items_a[i], items_a[j], row);
      pairs.distances_b[k] =
          normalized_from_collapsed(items_b[i], items_b[j], row);
    }
  });
  return pairs;
}

}  // namespace codeprobe
