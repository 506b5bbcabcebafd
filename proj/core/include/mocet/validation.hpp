#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mocet/corpus.hpp"
#include "mocet/knn.hpp"

namespace mocet {

struct LooPrediction {
    std::string id;
    double predicted_p = 0.0;
    int outcome = 0;
    std::vector<std::string> neighbor_ids;  // never contains `id`
};

// Do k-NN predictions rank successful reference items above failed ones?
struct SeparationResult {
    std::size_t k = 0;
    std::size_t n_correct = 0;
    std::size_t n_incorrect = 0;
    double mean_p_correct = 0.0;
    double mean_p_incorrect = 0.0;
    double std_error_correct = 0.0;
    double std_error_incorrect = 0.0;
    double u_statistic = 0.0;  // U of the outcome-1 group
    // Two-sided p-value of U. Computed by permuting outcomes through the
    // neighbour graph (see SeparationOptions) when the predictions carry one,
    // otherwise equal to p_value_u_normal.
    double p_value_u = 1.0;
    double p_value_u_normal = 1.0;  // normal approximation, tie corrected
    std::size_t permutations = 0;   // 0 when p_value_u is the normal approximation
    double t_statistic = 0.0;
    double welch_df = 0.0;
    double p_value_t = 1.0;
    double auc = 0.0;  // u_statistic / (n_correct n_incorrect)
};

// Leave-one-out k-NN predictions are not independent (neighbours share
// labels), so the normal approximation to U over-rejects under the null. The
// permutation p-value re-derives every prediction from permuted outcomes over
// the same neighbour lists and compares |U - n1 n0 / 2|.
struct SeparationOptions {
    std::size_t permutations = 9999;  // 0 disables the permutation p-value
    std::uint64_t seed = 0;
};

// Predicts every corpus item from its k nearest neighbours with that item
// removed. Items are excluded by position (hence by id), so an embedding-space
// duplicate under another id stays eligible. Requires corpus size >= k + 1.
std::vector<LooPrediction> leave_one_out_predictions(const NeighborIndex& index, std::size_t k,
                                                     unsigned threads = 1);
std::vector<LooPrediction> leave_one_out_predictions(const ReferenceCorpus& corpus, std::size_t k,
                                                     Metric metric = Metric::euclidean, unsigned threads = 1);

// Mann-Whitney U (primary) and Welch t on predicted_p split by outcome.
// The permutation p-value needs the predictions of a whole corpus: every
// neighbour id must name another prediction and all neighbour lists must have
// the same length. Otherwise p_value_u falls back to the normal approximation.
// Throws Error(precondition) unless both outcome classes are present.
SeparationResult separation_test(std::span<const LooPrediction> predictions, const SeparationOptions& options = {});

// One separation test per k over the same corpus.
std::vector<SeparationResult> k_sweep(const ReferenceCorpus& corpus, std::span<const std::size_t> ks,
                                      Metric metric = Metric::euclidean, unsigned threads = 1,
                                      const SeparationOptions& options = {});

}  // namespace mocet
