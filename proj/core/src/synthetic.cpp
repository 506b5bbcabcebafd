#include "mocet/synthetic.hpp"

#include <cstdio>
#include <string>
#include <vector>

#include "mocet/rng.hpp"

namespace mocet::synthetic {

namespace {

std::string make_id(char prefix, std::size_t i) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%c%04zu", prefix, i);
    return buffer;
}

}  // namespace

ReferenceCorpus two_cluster_corpus(const TwoClusterOptions& options, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<ReferenceItem> items;
    items.reserve(options.items);
    const std::size_t half = options.items / 2;
    for (std::size_t i = 0; i < options.items; ++i) {
        const bool in_a = i < half;
        const double centre = in_a ? options.separation : -options.separation;
        std::vector<double> values(options.dim);
        for (auto& v : values) v = centre + options.noise * rng.normal();
        ReferenceItem item;
        item.id = make_id(in_a ? 'a' : 'b', in_a ? i : i - half);
        item.embedding = EmbeddingVector(std::move(values));
        item.outcome = rng.uniform() < (in_a ? options.rate_a : options.rate_b) ? 1 : 0;
        item.category = in_a ? "A" : "B";
        items.push_back(std::move(item));
    }
    return ReferenceCorpus(std::move(items));
}

ReferenceCorpus random_corpus(std::size_t items, std::size_t dim, double base_rate, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<ReferenceItem> out;
    out.reserve(items);
    for (std::size_t i = 0; i < items; ++i) {
        std::vector<double> values(dim);
        for (auto& v : values) v = rng.normal();
        ReferenceItem item;
        item.id = make_id('r', i);
        item.embedding = EmbeddingVector(std::move(values));
        item.outcome = rng.uniform() < base_rate ? 1 : 0;
        out.push_back(std::move(item));
    }
    return ReferenceCorpus(std::move(out));
}

ReferenceCorpus shuffle_outcomes(const ReferenceCorpus& corpus, std::uint64_t seed) {
    std::vector<int> outcomes;
    outcomes.reserve(corpus.size());
    for (const auto& item : corpus.items()) outcomes.push_back(item.outcome);
    SplitMix64 rng(seed);
    rng.shuffle(outcomes.begin(), outcomes.end());
    auto items = corpus.items();
    for (std::size_t i = 0; i < items.size(); ++i) items[i].outcome = outcomes[i];
    return ReferenceCorpus(std::move(items));
}

}  // namespace mocet::synthetic
