// codeprobe/common.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_COMMON_H_
#define CODEPROBE_COMMON_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace codeprobe {

// A sequence of interned symbols. Codes are already integers; phoneme labels
// are interned through LabelInterner before edit-distance work. Strings from
// different alphabets must not be compared.
using SymbolString = std::vector<int32_t>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a. Used for file content hashes, run ids and seed derivation.
constexpr uint64_t kFnvBasis = 0xcbf29ce484222325ull;
uint64_t fnv1a64(const void *data, size_t size, uint64_t h = kFnvBasis);
uint64_t fnv1a64(std::string_view s, uint64_t h = kFnvBasis);

// Derives an independent named sub-seed from a master seed. All randomness in
// the toolkit flows from one seed through these, never through global state.
uint64_t derive_seed(uint64_t base, std::string_view tag);
uint64_t derive_seed(uint64_t base, uint64_t stream);

// Deterministic RNG wrapper. mt19937_64 has a standard-pinned sequence; the
// bounded draws below avoid std::uniform_int_distribution, whose output is
// implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  // Unbiased draw in [0, n). n must be > 0.
  uint64_t below(uint64_t n);

  // Inclusive integer range.
  int64_t range_inclusive(int64_t lo, int64_t hi);

  // 53-bit draw in [0, 1).
  double unit();

  template <typename T>
  void shuffle(std::vector<T> &v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// k distinct values from [0, population), sorted ascending (Floyd's method).
std::vector<uint64_t> sample_without_replacement(uint64_t population,
                                                 uint64_t k, Rng &rng);

// Runs run_chunk(begin, end) over a contiguous partition of [0, n) on up to
// `jobs` threads. Chunks are disjoint, so writes to per-index slots are safe
// and results do not depend on scheduling. jobs == 0 selects the hardware
// concurrency; jobs == 1 runs inline.
void parallel_for(size_t n, unsigned jobs,
                  const std::function<void(size_t, size_t)> &run_chunk);

unsigned resolve_jobs(unsigned requested);

void log_warn(const std::string &message);

// Whole-file read; throws ParseError if the file cannot be opened.
std::string read_text_file(const std::string &path);

}  // namespace codeprobe

#endif  // CODEPROBE_COMMON_H_
