#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mocet/corpus.hpp"

namespace mocet::testing {

inline ReferenceItem item(std::string id, std::vector<double> embedding, int outcome,
                          std::optional<std::string> category = std::nullopt) {
    ReferenceItem it;
    it.id = std::move(id);
    it.embedding = EmbeddingVector(std::move(embedding));
    it.outcome = outcome;
    it.category = std::move(category);
    return it;
}

inline ReferenceCorpus parse_corpus(const std::string& text) {
    std::istringstream in(text);
    return load_corpus(in);
}

inline Protocol parse_protocol(const std::string& text) {
    std::istringstream in(text);
    return load_protocol(in);
}

// Independent brute-force k-NN: full Euclidean distance sort, ties by id.
inline std::vector<std::pair<std::string, double>> brute_force_knn(const ReferenceCorpus& corpus,
                                                                   const std::vector<double>& query,
                                                                   std::size_t k,
                                                                   const std::string& skip_id = {}) {
    std::vector<std::pair<std::string, double>> all;
    for (const auto& it : corpus.items()) {
        if (!skip_id.empty() && it.id == skip_id) continue;
        double s = 0.0;
        const auto v = it.embedding.values();
        for (std::size_t j = 0; j < query.size(); ++j) s += (query[j] - v[j]) * (query[j] - v[j]);
        all.emplace_back(it.id, std::sqrt(s));
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return a.first < b.first;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

inline int outcome_of(const ReferenceCorpus& corpus, const std::string& id) {
    for (const auto& it : corpus.items()) {
        if (it.id == id) return it.outcome;
    }
    return -1;
}

}  // namespace mocet::testing
