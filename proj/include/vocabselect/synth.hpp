#pragma once

// synth.hpp -- deterministic Zipfian corpus generator.  Produces training
// corpora with partially overlapping vocabularies and held-out segments
// sampled from a fixed mixture of them, for desk-scale experiments.

#include <cstdint>
#include <string>
#include <vector>

namespace vocabselect {

struct SynthComponent {
    std::string name;
    std::uint32_t vocab_size = 0;
    std::uint64_t tokens = 0;
    double zipf_exponent = 1.0;
};

struct SynthSpec {
    std::vector<SynthComponent> components;
    // fraction of each component's vocabulary drawn from a shared pool
    double overlap = 0.3;
    // mixture over components used to sample the held-out segments
    std::vector<double> mixture;
    std::size_t segments = 6;
    std::uint64_t segment_tokens = 4000;
    std::uint64_t seed = 1;
};

struct SynthResult {
    std::vector<std::string> component_names;
    std::vector<std::vector<std::string>> component_tokens;
    std::vector<std::vector<std::string>> segment_tokens;
};

// Identical spec (including seed) yields identical token streams.  The
// sampler draws uniform doubles from a seeded mt19937_64 and inverts the
// explicit Zipf CDF, so no implementation-defined distribution is involved.
SynthResult generate_corpora(const SynthSpec &spec);

} // namespace vocabselect
