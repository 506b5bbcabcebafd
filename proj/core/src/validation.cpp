#include "mocet/validation.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>
#include <unordered_map>

#include "mocet/error.hpp"
#include "mocet/parallel.hpp"
#include "mocet/rng.hpp"
#include "mocet/stats.hpp"

namespace mocet {

std::vector<LooPrediction> leave_one_out_predictions(const NeighborIndex& index, std::size_t k, unsigned threads) {
    if (k == 0) throw Error(ErrorKind::domain, "k must be >= 1", {}, "k");
    if (index.size() < k + 1) {
        throw Error(ErrorKind::precondition,
                    "corpus of " + std::to_string(index.size()) + " items is too small for k = " + std::to_string(k),
                    {}, "k");
    }
    const auto& items = index.corpus().items();
    std::vector<LooPrediction> predictions(items.size());
    for_each_chunk(items.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto neighbors = index.nearest(items[i].embedding.values(), k, i);
            auto& out = predictions[i];
            out.id = items[i].id;
            out.outcome = items[i].outcome;
            std::size_t successes = 0;
            out.neighbor_ids.reserve(k);
            for (const auto& n : neighbors) {
                successes += static_cast<std::size_t>(items[n.position].outcome);
                out.neighbor_ids.push_back(n.id);
            }
            out.predicted_p = static_cast<double>(successes) / static_cast<double>(k);
        }
    });
    return predictions;
}

std::vector<LooPrediction> leave_one_out_predictions(const ReferenceCorpus& corpus, std::size_t k, Metric metric,
                                                     unsigned threads) {
    return leave_one_out_predictions(build_index(corpus, metric), k, threads);
}

namespace {

void split_by_outcome(std::span<const LooPrediction> predictions, std::vector<double>& correct,
                      std::vector<double>& incorrect) {
    correct.clear();
    incorrect.clear();
    for (const auto& p : predictions) (p.outcome == 1 ? correct : incorrect).push_back(p.predicted_p);
}

// Neighbour lists as positions into `predictions`; empty if any id is unknown
// or the lists differ in length.
std::vector<std::vector<std::uint32_t>> neighbour_graph(std::span<const LooPrediction> predictions) {
    std::unordered_map<std::string_view, std::uint32_t> position;
    position.reserve(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!position.emplace(predictions[i].id, static_cast<std::uint32_t>(i)).second) return {};
    }
    const std::size_t k = predictions.front().neighbor_ids.size();
    if (k == 0) return {};
    std::vector<std::vector<std::uint32_t>> graph(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto& ids = predictions[i].neighbor_ids;
        if (ids.size() != k) return {};
        graph[i].reserve(k);
        for (const auto& id : ids) {
            auto it = position.find(id);
            if (it == position.end() || it->second == i) return {};
            graph[i].push_back(it->second);
        }
    }
    return graph;
}

// U of the label-1 group when every prediction is an integer count in [0, k].
double u_from_counts(std::span<const std::uint32_t> counts, std::span<const int> labels, std::size_t k,
                     std::vector<std::uint32_t>& ones, std::vector<std::uint32_t>& zeros) {
    ones.assign(k + 1, 0);
    zeros.assign(k + 1, 0);
    for (std::size_t i = 0; i < counts.size(); ++i) ++(labels[i] == 1 ? ones : zeros)[counts[i]];
    double u = 0.0;
    double zeros_below = 0.0;
    for (std::size_t v = 0; v <= k; ++v) {
        u += static_cast<double>(ones[v]) * (zeros_below + 0.5 * static_cast<double>(zeros[v]));
        zeros_below += static_cast<double>(zeros[v]);
    }
    return u;
}

double pipeline_permutation_p(std::span<const LooPrediction> predictions,
                              const std::vector<std::vector<std::uint32_t>>& graph, double observed_u,
                              double n_pairs, const SeparationOptions& options) {
    const std::size_t k = graph.front().size();
    std::vector<int> labels;
    labels.reserve(predictions.size());
    for (const auto& p : predictions) labels.push_back(p.outcome);

    const double centre = 0.5 * n_pairs;
    const double observed_gap = std::abs(observed_u - centre);
    std::vector<std::uint32_t> counts(predictions.size());
    std::vector<std::uint32_t> ones;
    std::vector<std::uint32_t> zeros;
    SplitMix64 rng(options.seed);
    std::size_t extreme = 0;
    for (std::size_t b = 0; b < options.permutations; ++b) {
        rng.shuffle(labels.begin(), labels.end());
        for (std::size_t i = 0; i < graph.size(); ++i) {
            std::uint32_t c = 0;
            for (auto j : graph[i]) c += static_cast<std::uint32_t>(labels[j]);
            counts[i] = c;
        }
        const double u = u_from_counts(counts, labels, k, ones, zeros);
        // U is a multiple of 0.5, so the comparison is exact.
        if (std::abs(u - centre) >= observed_gap) ++extreme;
    }
    return static_cast<double>(extreme + 1) / static_cast<double>(options.permutations + 1);
}

}  // namespace

SeparationResult separation_test(std::span<const LooPrediction> predictions, const SeparationOptions& options) {
    std::vector<double> correct;
    std::vector<double> incorrect;
    split_by_outcome(predictions, correct, incorrect);
    if (correct.empty() || incorrect.empty()) {
        throw Error(ErrorKind::precondition, "separation test needs both outcome classes");
    }

    SeparationResult result;
    result.k = predictions.front().neighbor_ids.size();
    result.n_correct = correct.size();
    result.n_incorrect = incorrect.size();

    const auto sc = stats::summarize(correct);
    const auto si = stats::summarize(incorrect);
    result.mean_p_correct = sc.mean;
    result.mean_p_incorrect = si.mean;
    result.std_error_correct = sc.std_error;
    result.std_error_incorrect = si.std_error;

    const auto mw = stats::mann_whitney_u(correct, incorrect);
    result.u_statistic = mw.u;
    result.p_value_u_normal = mw.p_value;
    result.p_value_u = mw.p_value;
    result.auc = mw.auc;

    if (options.permutations > 0) {
        const auto graph = neighbour_graph(predictions);
        if (!graph.empty()) {
            const double n_pairs = static_cast<double>(correct.size()) * static_cast<double>(incorrect.size());
            result.p_value_u = pipeline_permutation_p(predictions, graph, mw.u, n_pairs, options);
            result.permutations = options.permutations;
        }
    }

    const auto welch = stats::welch_t_test(correct, incorrect);
    result.t_statistic = welch.t;
    result.welch_df = welch.df;
    result.p_value_t = welch.p_value;
    return result;
}

std::vector<SeparationResult> k_sweep(const ReferenceCorpus& corpus, std::span<const std::size_t> ks, Metric metric,
                                      unsigned threads, const SeparationOptions& options) {
    for (auto k : ks) {
        if (k == 0 || k >= corpus.size()) {
            throw Error(ErrorKind::precondition,
                        "k = " + std::to_string(k) + " is invalid for a corpus of " + std::to_string(corpus.size()) +
                            " items (need 1 <= k < size)",
                        {}, "k");
        }
    }
    const auto index = build_index(corpus, metric);
    std::vector<SeparationResult> results;
    results.reserve(ks.size());
    for (auto k : ks) {
        const auto predictions = leave_one_out_predictions(index, k, threads);
        results.push_back(separation_test(predictions, options));
        results.back().k = k;
    }
    return results;
}

}  // namespace mocet
