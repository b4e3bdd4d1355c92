// codeprobe/rsa.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_RSA_H_
#define CODEPROBE_RSA_H_

#include <span>
#include <vector>

#include "codeprobe/corpus.h"
#include "codeprobe/editdist.h"
#include "codeprobe/stats.h"

namespace codeprobe {

enum class StimulusKind { kComplete, kTriplet };

const char *to_string(StimulusKind kind);

struct RsaResult {
  double correlation = 0.0;
  size_t n_pairs = 0;
  StimulusKind input_kind = StimulusKind::kComplete;
  CorrelationKind correlation_kind = CorrelationKind::kPearson;
};

// Correlation between the two distance lists of `pairs`. Throws
// "zero variance" when both lists are constant; a single constant list warns
// and yields correlation 0.
RsaResult rsa_score(const DistancePairs &pairs,
                    CorrelationKind kind = CorrelationKind::kPearson);

// Pairwise normalized edit distances in two symbol spaces, correlated.
// code_strings are collapsed before distance computation; references are
// compared as given.
RsaResult rsa_on_strings(std::span<const SymbolString> code_strings,
                         std::span<const SymbolString> references,
                         const PairSampler &sampler, CorrelationKind kind,
                         StimulusKind input_kind, unsigned jobs = 1);

// Full-utterance RSA: stimuli are whole code sequences versus index-aligned
// reference strings (typically phoneme label sequences).
RsaResult rsa_on_corpus(std::span<const CodeSequence> codes,
                        std::span<const SymbolString> references,
                        const PairSampler &sampler,
                        CorrelationKind kind = CorrelationKind::kPearson,
                        unsigned jobs = 1);

}  // namespace codeprobe

#endif  // CODEPROBE_RSA_H_
