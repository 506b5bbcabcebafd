#include "mocet/engine.hpp"

#include <cmath>
#include <variant>

#include "mocet/error.hpp"
#include "mocet/parallel.hpp"
#include "mocet/rng.hpp"

namespace mocet {

const char* to_string(EstimateMethod method) noexcept {
    return method == EstimateMethod::monte_carlo ? "monte_carlo" : "closed_form";
}

namespace {

void check_probabilities(std::span<const double> probabilities) {
    if (probabilities.empty()) throw Error(ErrorKind::empty_input, "no step probabilities given");
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double p = probabilities[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(ErrorKind::domain, "step probability " + std::to_string(i) + " outside [0,1]", {}, "p");
        }
    }
}

}  // namespace

SuccessEstimate closed_form_success(std::span<const double> probabilities) {
    check_probabilities(probabilities);
    SuccessEstimate estimate;
    estimate.method = EstimateMethod::closed_form;
    estimate.probabilities.assign(probabilities.begin(), probabilities.end());

    bool tiny = false;
    for (double p : probabilities) {
        if (p == 0.0) {
            estimate.e_y = 0.0;
            return estimate;
        }
        tiny = tiny || p < kLogSpaceThreshold;
    }
    if (tiny) {
        double log_sum = 0.0;
        for (double p : probabilities) log_sum += std::log(p);
        estimate.e_y = std::exp(log_sum);
    } else {
        double product = 1.0;
        for (double p : probabilities) product *= p;
        estimate.e_y = product;
    }
    return estimate;
}

SimulationResult simulate(std::span<const double> probabilities, std::uint64_t trials, std::uint64_t seed,
                          unsigned threads) {
    check_probabilities(probabilities);
    if (trials == 0) throw Error(ErrorKind::domain, "trials must be >= 1", {}, "trials");

    std::vector<std::uint64_t> counts(resolve_threads(threads), 0);
    for_each_chunk(static_cast<std::size_t>(trials), threads, [&](std::size_t begin, std::size_t end, std::size_t c) {
        std::uint64_t successes = 0;
        for (std::size_t t = begin; t < end; ++t) {
            TrialStream stream(seed, t);
            bool success = true;
            for (double p : probabilities) {
                if (!stream.bernoulli(p)) {
                    success = false;
                    break;
                }
            }
            successes += success ? 1 : 0;
        }
        counts[c] = successes;
    });

    SimulationResult result;
    result.trials = trials;
    result.seed = seed;
    for (auto c : counts) result.successes += c;
    const double n = static_cast<double>(trials);
    result.mean = static_cast<double>(result.successes) / n;
    result.std_error = std::sqrt(result.mean * (1.0 - result.mean) / n);
    return result;
}

double mocet_score(const SuccessEstimate& success, const HarmModel& harm) {
    return harm.weight * success.e_y;
}

double mocet_score(const SimulationResult& simulation, const HarmModel& harm) {
    return harm.weight * simulation.mean;
}

double cumulative_mocet(double mocet, const HarmModel& harm) {
    return harm.occurrence_rate * mocet;
}

MocetReport score_protocol(const Protocol& protocol, const NeighborIndex* index, const ScoreConfig& config) {
    validate_protocol(protocol);
    if (config.k == 0) throw Error(ErrorKind::domain, "k must be >= 1", {}, "k");
    if (index && index->metric() != config.metric) {
        throw Error(ErrorKind::precondition, std::string("index metric ") + to_string(index->metric()) +
                                                 " differs from configured metric " + to_string(config.metric));
    }

    MocetReport report;
    report.scenario = protocol.scenario;
    report.harm = protocol.harm;
    report.config = config;

    std::vector<double> probabilities;
    probabilities.reserve(protocol.steps.size());
    for (const auto& step : protocol.steps) {
        StepProbabilityEstimate estimate;
        if (const auto* fixed = std::get_if<FixedProbability>(&step.source)) {
            estimate.step_id = step.id;
            estimate.p = fixed->p;
            estimate.source = EstimateSource::fixed;
        } else {
            if (!index) {
                throw Error(ErrorKind::precondition,
                            "step '" + step.id + "' needs a reference corpus (embedding or category source)");
            }
            if (const auto* label = std::get_if<CategoryLabel>(&step.source)) {
                estimate.step_id = step.id;
                estimate.p = estimate_categorical_probability(index->corpus(), label->name);
                estimate.source = EstimateSource::category;
            } else {
                estimate = estimate_step_probability(*index, step, config.k, config.exclude_matching_ids);
            }
        }
        probabilities.push_back(estimate.p);
        report.steps.push_back(std::move(estimate));
    }

    const auto closed = closed_form_success(probabilities);
    report.e_y = closed.e_y;
    report.simulation = simulate(probabilities, config.trials, config.seed, config.threads);
    report.mocet = mocet_score(closed, protocol.harm);
    report.cumulative_mocet = cumulative_mocet(report.mocet, protocol.harm);
    report.mocet_monte_carlo = mocet_score(report.simulation, protocol.harm);
    report.cumulative_mocet_monte_carlo = cumulative_mocet(report.mocet_monte_carlo, protocol.harm);
    return report;
}

}  // namespace mocet
