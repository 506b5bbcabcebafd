#include "mocet/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "mocet/error.hpp"

namespace mocet {

const char* to_string(Metric metric) noexcept {
    return metric == Metric::cosine ? "cosine" : "euclidean";
}

Metric parse_metric(std::string_view name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "cosine") return Metric::cosine;
    throw Error(ErrorKind::domain, "unknown metric '" + std::string(name) + "' (expected euclidean|cosine)", {},
                "metric");
}

const char* to_string(EstimateSource source) noexcept {
    switch (source) {
        case EstimateSource::knn: return "knn";
        case EstimateSource::category: return "category";
        case EstimateSource::fixed: return "fixed";
    }
    return "unknown";
}

namespace {

double l2_norm(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

}  // namespace

NeighborIndex::NeighborIndex(std::shared_ptr<const ReferenceCorpus> corpus, Metric metric)
    : corpus_(std::move(corpus)), metric_(metric) {
    if (!corpus_ || corpus_->empty()) {
        throw Error(ErrorKind::empty_input, "cannot build a neighbor index over an empty corpus");
    }
    const auto& items = corpus_->items();
    dim_ = corpus_->dim();
    rows_.reserve(items.size() * dim_);
    for (const auto& item : items) {
        const auto values = item.embedding.values();
        rows_.insert(rows_.end(), values.begin(), values.end());
    }
    if (metric_ == Metric::cosine) {
        norms_.reserve(items.size());
        for (const auto& item : items) {
            const double norm = l2_norm(item.embedding.values());
            if (norm == 0.0) {
                throw Error(ErrorKind::domain, "item '" + item.id + "' has a zero-norm embedding (cosine metric)", {},
                            "embedding");
            }
            norms_.push_back(norm);
        }
    }
    by_id_.resize(items.size());
    std::iota(by_id_.begin(), by_id_.end(), 0u);
    std::sort(by_id_.begin(), by_id_.end(),
              [&](std::uint32_t a, std::uint32_t b) { return items[a].id < items[b].id; });
    id_rank_.resize(items.size());
    for (std::uint32_t rank = 0; rank < by_id_.size(); ++rank) id_rank_[by_id_[rank]] = rank;
}

double NeighborIndex::distance(std::span<const double> query, std::size_t position) const {
    const double* row = rows_.data() + position * dim_;
    if (metric_ == Metric::euclidean) {
        double sum = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) {
            const double d = query[j] - row[j];
            sum += d * d;
        }
        return std::sqrt(sum);
    }
    double dot = 0.0;
    double qq = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
        dot += query[j] * row[j];
        qq += query[j] * query[j];
    }
    return 1.0 - dot / (std::sqrt(qq) * norms_[position]);
}

std::vector<Neighbor> NeighborIndex::nearest(std::span<const double> query, std::size_t k,
                                             std::optional<std::size_t> exclude) const {
    if (query.size() != dim_) {
        throw Error(ErrorKind::dimension_mismatch, "query dim " + std::to_string(query.size()) +
                                                       " does not match index dim " + std::to_string(dim_));
    }
    if (metric_ == Metric::cosine && l2_norm(query) == 0.0) {
        throw Error(ErrorKind::domain, "zero-norm query under cosine metric", {}, "embedding");
    }
    const std::size_t available = size() - (exclude && *exclude < size() ? 1 : 0);
    if (k == 0 || k > available) {
        throw Error(ErrorKind::precondition, "k = " + std::to_string(k) + " must lie in [1, " +
                                                 std::to_string(available) + "]",
                    {}, "k");
    }

    struct Candidate {
        double distance;
        std::uint32_t rank;
        std::uint32_t position;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(available);
    for (std::size_t i = 0; i < size(); ++i) {
        if (exclude && i == *exclude) continue;
        candidates.push_back({distance(query, i), id_rank_[i], static_cast<std::uint32_t>(i)});
    }
    auto closer = [](const Candidate& a, const Candidate& b) {
        return std::tie(a.distance, a.rank) < std::tie(b.distance, b.rank);
    };
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end(),
                      closer);

    std::vector<Neighbor> result;
    result.reserve(k);
    const auto& items = corpus_->items();
    for (std::size_t i = 0; i < k; ++i) {
        result.push_back({items[candidates[i].position].id, candidates[i].distance, candidates[i].position});
    }
    return result;
}

std::optional<std::size_t> NeighborIndex::position_of(std::string_view id) const {
    const auto& items = corpus_->items();
    auto it = std::lower_bound(by_id_.begin(), by_id_.end(), id,
                               [&](std::uint32_t pos, std::string_view key) { return items[pos].id < key; });
    if (it == by_id_.end() || items[*it].id != id) return std::nullopt;
    return *it;
}

NeighborIndex build_index(const ReferenceCorpus& corpus, Metric metric) {
    return NeighborIndex(std::make_shared<const ReferenceCorpus>(corpus), metric);
}

std::vector<Neighbor> nearest_neighbors(const NeighborIndex& index, const EmbeddingVector& query, std::size_t k) {
    return index.nearest(query.values(), k);
}

StepProbabilityEstimate estimate_step_probability(const NeighborIndex& index, const ProtocolStep& step,
                                                  std::size_t k, bool exclude_matching_id) {
    const auto* embedding = std::get_if<EmbeddingVector>(&step.source);
    if (!embedding) {
        throw Error(ErrorKind::precondition, "step '" + step.id + "' carries no embedding", {}, "embedding");
    }
    std::optional<std::size_t> exclude;
    if (exclude_matching_id) exclude = index.position_of(step.id);

    const auto neighbors = index.nearest(embedding->values(), k, exclude);
    const auto& items = index.corpus().items();
    std::size_t successes = 0;
    StepProbabilityEstimate estimate;
    estimate.step_id = step.id;
    estimate.source = EstimateSource::knn;
    estimate.k_used = k;
    estimate.neighbor_ids.reserve(k);
    for (const auto& n : neighbors) {
        successes += static_cast<std::size_t>(items[n.position].outcome);
        estimate.neighbor_ids.push_back(n.id);
    }
    estimate.p = static_cast<double>(successes) / static_cast<double>(k);
    return estimate;
}

double estimate_categorical_probability(const ReferenceCorpus& corpus, std::string_view category) {
    std::size_t count = 0;
    std::size_t successes = 0;
    for (const auto& item : corpus.items()) {
        if (item.category && *item.category == category) {
            ++count;
            successes += static_cast<std::size_t>(item.outcome);
        }
    }
    if (count == 0) {
        throw Error(ErrorKind::unknown_category, "no corpus items in category '" + std::string(category) + "'", {},
                    "category");
    }
    return static_cast<double>(successes) / static_cast<double>(count);
}

}  // namespace mocet
