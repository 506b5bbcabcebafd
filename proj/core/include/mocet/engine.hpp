#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mocet/corpus.hpp"
#include "mocet/knn.hpp"

namespace mocet {

inline constexpr std::uint64_t kDefaultTrials = 100000;
// Below this step probability the closed-form product is taken in log space.
inline constexpr double kLogSpaceThreshold = 1e-3;

enum class EstimateMethod { closed_form, monte_carlo };
const char* to_string(EstimateMethod method) noexcept;

struct SuccessEstimate {
    double e_y = 0.0;
    EstimateMethod method = EstimateMethod::closed_form;
    std::vector<double> probabilities;
};

struct SimulationResult {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double mean = 0.0;       // successes / trials
    double std_error = 0.0;  // sqrt(mean (1 - mean) / trials)
    std::uint64_t seed = 0;
};

// E[Y] = prod p_i. Throws on an empty sequence or p outside [0,1].
SuccessEstimate closed_form_success(std::span<const double> probabilities);

// Runs `trials` independent chains of Bernoulli steps; a trial succeeds iff
// every step succeeds. Step i of trial t draws from TrialStream(seed, t), so
// the result is identical for every thread count.
SimulationResult simulate(std::span<const double> probabilities, std::uint64_t trials, std::uint64_t seed,
                          unsigned threads = 1);

// W on success, 0 on failure: the expected threat per incident is W * E[Y].
double mocet_score(const SuccessEstimate& success, const HarmModel& harm);
double mocet_score(const SimulationResult& simulation, const HarmModel& harm);
double cumulative_mocet(double mocet, const HarmModel& harm);

struct ScoreConfig {
    std::size_t k = kDefaultK;
    std::uint64_t trials = kDefaultTrials;
    std::uint64_t seed = 0;
    Metric metric = Metric::euclidean;
    // Leave a corpus item out of a step's neighborhood when its id equals the step id.
    bool exclude_matching_ids = false;
    unsigned threads = 1;  // not part of the result; any value gives the same report
};

struct MocetReport {
    std::string scenario;
    HarmModel harm;
    std::vector<StepProbabilityEstimate> steps;
    double e_y = 0.0;  // closed form
    SimulationResult simulation;
    double mocet = 0.0;             // weight * closed-form e_y
    double cumulative_mocet = 0.0;  // occurrence_rate * mocet
    double mocet_monte_carlo = 0.0;
    double cumulative_mocet_monte_carlo = 0.0;
    ScoreConfig config;
};

// Resolves every step probability (k-NN, category mean or fixed), then fills
// in closed-form E[Y], the simulation and both scores. `index` may be null
// when the protocol has only fixed-probability steps.
MocetReport score_protocol(const Protocol& protocol, const NeighborIndex* index, const ScoreConfig& config);

}  // namespace mocet
