#pragma once

#include <cstdint>

#include "obc/corpus.hpp"

namespace obc {

// Knobs for the seeded synthetic corpus. Every document mentions at least
// one disease in the body, so disease presence alone never separates the
// classes; relevance shows up as signal words inside the disease sentence
// (probability signal_strength) and as location mentions inside the
// +/-1-sentence window (probability location_correlation for relevant
// documents, a quarter of that for irrelevant ones).
struct SynthParams {
    size_t n_relevant = 0;
    size_t n_irrelevant = 0;
    double signal_strength = 1.0;      // p in [0,1]
    double location_correlation = 0.0; // q in [0,1]
    size_t n_diseases = 12;
    size_t n_locations = 40;
    size_t n_background_words = 300;
    size_t n_signal_words = 6;
    uint64_t seed = 42;
};

// Deterministic for fixed params: regenerating yields byte-identical
// documents. Throws InvalidParamError on out-of-range knobs.
Corpus generate_synthetic_corpus(const SynthParams& params);

// The first n entries of each generator lexicon, as used for the given
// sizes. Signal and background pools never overlap.
std::vector<std::string> synth_disease_lexicon(size_t n);
std::vector<std::string> synth_location_lexicon(size_t n);
std::vector<std::string> synth_background_lexicon(size_t n);
std::vector<std::string> synth_signal_lexicon(size_t n);

}  // namespace obc
