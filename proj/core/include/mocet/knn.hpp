#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mocet/corpus.hpp"

namespace mocet {

inline constexpr std::size_t kDefaultK = 20;

enum class Metric { euclidean, cosine };

const char* to_string(Metric metric) noexcept;
// Throws Error(domain) for anything other than "euclidean" or "cosine".
Metric parse_metric(std::string_view name);

struct Neighbor {
    std::string id;
    double distance = 0.0;
    std::size_t position = 0;  // index into the corpus items
};

// Exact nearest-neighbor search over an immutable reference corpus.
//
// Results are ordered by ascending distance, ties broken by ascending id, so a
// query is a total function of (corpus, metric, query, k). Euclidean distance
// is sqrt(sum (a_i - b_i)^2); cosine distance is 1 - a.b / (|a| |b|).
// A built index is read-only and may be queried from several threads.
class NeighborIndex {
public:
    explicit NeighborIndex(std::shared_ptr<const ReferenceCorpus> corpus, Metric metric = Metric::euclidean);

    const ReferenceCorpus& corpus() const noexcept { return *corpus_; }
    Metric metric() const noexcept { return metric_; }
    std::size_t size() const noexcept { return corpus_->size(); }
    std::size_t dim() const noexcept { return dim_; }

    double distance(std::span<const double> query, std::size_t position) const;

    // `exclude` removes one corpus position from consideration (leave-one-out).
    std::vector<Neighbor> nearest(std::span<const double> query, std::size_t k,
                                  std::optional<std::size_t> exclude = std::nullopt) const;

    std::optional<std::size_t> position_of(std::string_view id) const;

private:
    std::shared_ptr<const ReferenceCorpus> corpus_;
    Metric metric_;
    std::size_t dim_ = 0;
    std::vector<double> rows_;             // row-major copy of the embeddings
    std::vector<double> norms_;            // cosine only
    std::vector<std::uint32_t> id_rank_;   // lexicographic rank of each id
    std::vector<std::uint32_t> by_id_;     // positions sorted by id
};

// Throws Error(empty_input) for an empty corpus.
NeighborIndex build_index(const ReferenceCorpus& corpus, Metric metric = Metric::euclidean);

std::vector<Neighbor> nearest_neighbors(const NeighborIndex& index, const EmbeddingVector& query, std::size_t k);

enum class EstimateSource { knn, category, fixed };
const char* to_string(EstimateSource source) noexcept;

struct StepProbabilityEstimate {
    std::string step_id;
    double p = 0.0;
    std::size_t k_used = 0;                 // 0 unless source == knn
    std::vector<std::string> neighbor_ids;  // empty unless source == knn
    EstimateSource source = EstimateSource::fixed;
};

// Mean outcome of the k nearest reference items: successes / k, no smoothing.
// With exclude_matching_id the corpus item whose id equals the step id (if any)
// is left out of the neighborhood.
StepProbabilityEstimate estimate_step_probability(const NeighborIndex& index, const ProtocolStep& step,
                                                  std::size_t k, bool exclude_matching_id = false);

// Mean outcome over corpus items carrying `category`.
double estimate_categorical_probability(const ReferenceCorpus& corpus, std::string_view category);

}  // namespace mocet
