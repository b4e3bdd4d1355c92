// codeprobe/rsa.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/rsa.h"

#include <stdexcept>

namespace codeprobe {

const char *to_string(StimulusKind kind) {
  return kind == StimulusKind::kComplete ? "complete" : "triplet";
}

RsaResult rsa_score(const DistancePairs &pairs, CorrelationKind kind) {
  if (pairs.size() < 2)
    throw std::invalid_argument("rsa_score: need at least 2 pairs");

  RsaResult result;
  result.n_pairs = pairs.size();
  result.correlation_kind = kind;

  auto is_constant = [](std::span<const double> xs) {
    for (double x : xs)
      if (x != xs.front()) return false;
    return true;
  };
  const bool const_a = is_constant(pairs.distances_a);
  const bool const_b = is_constant(pairs.distances_b);
  if (const_a && const_b)
    throw std::domain_error("rsa_score: zero variance in both distance lists");
  if (const_a || const_b) {
    log_warn("rsa_score: one distance list is constant; correlation set to 0");
    result.correlation = 0.0;
    return result;
  }

  result.correlation =
      kind == CorrelationKind::kPearson
          ? pearson(pairs.distances_a, pairs.distances_b)
          : spearman(pairs.distances_a, pairs.distances_b);
  return result;
}

RsaResult rsa_on_strings(std::span<const SymbolString> code_strings,
                         std::span<const SymbolString> references,
                         const PairSampler &sampler, CorrelationKind kind,
                         StimulusKind input_kind, unsigned jobs) {
  if (code_strings.size() != references.size())
    throw std::invalid_argument("rsa_on_strings: stimulus lists differ in length");
  std::vector<SymbolString> collapsed;
  collapsed.reserve(code_strings.size());
  for (const SymbolString &s : code_strings)
    collapsed.push_back(collapse_repeats(s));
  const DistancePairs pairs =
      pairwise_distances(collapsed, references, sampler, jobs);
  RsaResult result = rsa_score(pairs, kind);
  result.input_kind = input_kind;
  return result;
}

RsaResult rsa_on_corpus(std::span<const CodeSequence> codes,
                        std::span<const SymbolString> references,
                        const PairSampler &sampler, CorrelationKind kind,
                        unsigned jobs) {
  std::vector<SymbolString> code_strings;
  code_strings.reserve(codes.size());
  for (const CodeSequence &seq : codes) code_strings.push_back(seq.codes);
  return rsa_on_strings(code_strings, references, sampler, kind,
                        StimulusKind::kComplete, jobs);
}

}  // namespace codeprobe
