#pragma once

#include <cstddef>
#include <cstdint>

#include "mocet/corpus.hpp"

// Seeded synthetic corpora for tests, benchmarks and demos. Output depends only
// on the arguments (SplitMix64 based), not on the standard library in use.
namespace mocet::synthetic {

struct TwoClusterOptions {
    std::size_t items = 200;
    std::size_t dim = 8;
    double rate_a = 0.9;       // success probability in cluster A
    double rate_b = 0.1;       // success probability in cluster B
    double separation = 1.5;   // cluster centres at +/- separation on every axis
    double noise = 1.0;        // per-axis standard deviation
};

// Half the items around +centre with outcomes ~ Bernoulli(rate_a), half
// around -centre with Bernoulli(rate_b). Ids are "a0000", "b0000", ...
ReferenceCorpus two_cluster_corpus(const TwoClusterOptions& options, std::uint64_t seed);

// Gaussian embeddings with outcomes drawn independently at `base_rate`.
ReferenceCorpus random_corpus(std::size_t items, std::size_t dim, double base_rate, std::uint64_t seed);

// Same embeddings and ids, outcomes permuted.
ReferenceCorpus shuffle_outcomes(const ReferenceCorpus& corpus, std::uint64_t seed);

}  // namespace mocet::synthetic
