// codeprobe/common.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/common.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace codeprobe {

uint64_t fnv1a64(const void *data, size_t size, uint64_t h) {
  const auto *bytes = static_cast<const unsigned char *>(data);
  for (size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t fnv1a64(std::string_view s, uint64_t h) {
  return fnv1a64(s.data(), s.size(), h);
}

uint64_t derive_seed(uint64_t base, std::string_view tag) {
  uint64_t h = fnv1a64(&base, sizeof(base));
  return fnv1a64(tag, h);
}

uint64_t derive_seed(uint64_t base, uint64_t stream) {
  uint64_t h = fnv1a64(&base, sizeof(base));
  return fnv1a64(&stream, sizeof(stream), h);
}

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // Rejection sampling keeps the draw unbiased and fully deterministic.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

int64_t Rng::range_inclusive(int64_t lo, int64_t hi) {
  if (lo > hi) throw std::invalid_argument("Rng::range_inclusive: lo > hi");
  return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
}

double Rng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<uint64_t> sample_without_replacement(uint64_t population,
                                                 uint64_t k, Rng &rng) {
  if (k >= population) {
    std::vector<uint64_t> all(population);
    for (uint64_t i = 0; i < population; ++i) all[i] = i;
    return all;
  }
  std::vector<uint64_t> chosen;
  chosen.reserve(k);
  auto contains = [&chosen](uint64_t v) {
    for (uint64_t c : chosen)
      if (c == v) return true;
    return false;
  };
  // Floyd's algorithm; the linear membership scan is fine for the pair
  // budgets used here only if k is small relative to lookups, so switch to a
  // sorted insertion for large k.
  if (k <= 64) {
    for (uint64_t j = population - k; j < population; ++j) {
      uint64_t t = rng.below(j + 1);
      chosen.push_back(contains(t) ? j : t);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }
  std::vector<uint64_t> sorted;
  sorted.reserve(k);
  auto sorted_contains = [&sorted](uint64_t v) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
    return it != sorted.end() && *it == v;
  };
  auto sorted_insert = [&sorted](uint64_t v) {
    sorted.insert(std::lower_bound(sorted.begin(), sorted.end(), v), v);
  };
  for (uint64_t j = population - k; j < population; ++j) {
    uint64_t t = rng.below(j + 1);
    sorted_insert(sorted_contains(t) ? j : t);
  }
  return sorted;
}

void parallel_for(size_t n, unsigned jobs,
                  const std::function<void(size_t, size_t)> &run_chunk) {
  if (n == 0) return;
  unsigned workers = resolve_jobs(jobs);
  if (workers > n) workers = static_cast<unsigned>(n);
  if (workers <= 1) {
    run_chunk(0, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const size_t begin = static_cast<size_t>(w) * chunk;
    if (begin >= n) break;
    const size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&run_chunk, begin, end] { run_chunk(begin, end); });
  }
  for (auto &t : threads) t.join();
}

unsigned resolve_jobs(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void log_warn(const std::string &message) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << "WARNING: " << message << "\n";
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace codeprobe
