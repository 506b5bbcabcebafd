#include "mocet/error_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "mocet/error.hpp"
#include "mocet/rng.hpp"

namespace mocet {

CategoryProfile::CategoryProfile(std::vector<CategoryGroup> groups) : groups_(std::move(groups)) {
    if (groups_.empty()) throw Error(ErrorKind::empty_input, "category profile has no groups", {}, "groups");
    for (std::size_t k = 0; k < groups_.size(); ++k) {
        const auto& g = groups_[k];
        if (g.n == 0) throw Error(ErrorKind::domain, "group " + std::to_string(k) + " has n = 0", {}, "n");
        if (!(g.p > 0.0 && g.p <= 1.0)) {
            throw Error(ErrorKind::domain, "group " + std::to_string(k) + " p must lie in (0,1]", {}, "p");
        }
        total_steps_ += g.n;
    }
}

double weighted_mean_probability(const CategoryProfile& profile) {
    // Offset from the first group so a single category returns its p unchanged.
    const double anchor = profile.groups().front().p;
    double offset = 0.0;
    for (const auto& g : profile.groups()) offset += static_cast<double>(g.n) * (g.p - anchor);
    return anchor + offset / static_cast<double>(profile.total_steps());
}

std::vector<double> deviations(const CategoryProfile& profile, double p) {
    const double mean = weighted_mean_probability(profile);
    if (std::abs(p - mean) > 1e-12) {
        throw Error(ErrorKind::precondition, "p is not the weighted mean of the profile", {}, "p");
    }
    std::vector<double> alpha;
    alpha.reserve(profile.groups().size());
    for (const auto& g : profile.groups()) alpha.push_back(g.p - p);
    return alpha;
}

ErrorReport approximation_report(const CategoryProfile& profile) {
    ErrorReport report;
    const double p = weighted_mean_probability(profile);
    const double n = static_cast<double>(profile.total_steps());
    report.weighted_mean = p;
    report.deviations = deviations(profile, p);

    double log_exact = 0.0;
    double sum_sq = 0.0;
    double sum_cube = 0.0;
    const auto& groups = profile.groups();
    for (std::size_t k = 0; k < groups.size(); ++k) {
        const double nk = static_cast<double>(groups[k].n);
        const double alpha = report.deviations[k];
        log_exact += nk * std::log(groups[k].p);
        sum_sq += nk * alpha * alpha;
        sum_cube += nk * std::pow(std::abs(alpha / p), 3);
    }
    const double log_naive = n * std::log(p);
    report.bound_term = sum_sq / (2.0 * p * p);
    const double log_corrected = log_naive - report.bound_term;

    report.exact_e_y = std::exp(log_exact);
    report.naive_approx = std::exp(log_naive);
    report.second_order_approx = std::exp(log_corrected);
    report.relative_error_naive = std::abs(std::expm1(log_naive - log_exact));
    report.relative_error_corrected = std::abs(std::expm1(log_corrected - log_exact));
    report.deviation_ratio = std::sqrt(sum_sq / n) / p;
    report.third_order_term = sum_cube;
    return report;
}

CategoryProfile load_profile(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::malformed, std::string("invalid profile JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("groups") || !doc["groups"].is_array()) {
        throw Error(ErrorKind::missing_field, "profile must be an object with a 'groups' array", {}, "groups");
    }
    std::vector<CategoryGroup> groups;
    for (const auto& raw : doc["groups"]) {
        if (!raw.is_object()) throw Error(ErrorKind::malformed, "group entries must be objects", {}, "groups");
        if (!raw.contains("n") || !raw.contains("p")) {
            throw Error(ErrorKind::missing_field, "group requires 'n' and 'p'", {}, "groups");
        }
        const auto& n = raw["n"];
        if (!n.is_number_integer() || n.get<std::int64_t>() < 1) {
            throw Error(ErrorKind::domain, "'n' must be a positive integer", {}, "n");
        }
        if (!raw["p"].is_number()) throw Error(ErrorKind::malformed, "'p' must be a number", {}, "p");
        groups.push_back({static_cast<std::size_t>(n.get<std::int64_t>()), raw["p"].get<double>()});
    }
    return CategoryProfile(std::move(groups));
}

namespace {

// Random partition of `steps` into `m` positive counts.
std::vector<std::size_t> random_counts(std::size_t steps, std::size_t m, SplitMix64& rng) {
    std::vector<std::size_t> cuts;
    std::vector<std::size_t> pool(steps - 1);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i + 1;
    rng.shuffle(pool.begin(), pool.end());
    cuts.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m - 1));
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::size_t> counts;
    std::size_t prev = 0;
    for (auto c : cuts) {
        counts.push_back(c - prev);
        prev = c;
    }
    counts.push_back(steps - prev);
    return counts;
}

}  // namespace

std::vector<ErrorScalingRow> error_scaling_table(std::span<const double> ratios, std::size_t steps,
                                                 std::size_t profiles, std::uint64_t seed) {
    if (steps < 2) throw Error(ErrorKind::domain, "need at least 2 steps", {}, "steps");
    if (profiles == 0) throw Error(ErrorKind::domain, "need at least 1 profile", {}, "profiles");
    SplitMix64 rng(seed);

    std::vector<ErrorScalingRow> rows;
    for (double ratio : ratios) {
        ErrorScalingRow row;
        row.deviation_ratio = ratio;
        row.steps = steps;
        std::size_t attempts = 0;
        while (row.profiles < profiles) {
            if (++attempts > 1000 * profiles) {
                throw Error(ErrorKind::domain, "deviation ratio " + std::to_string(ratio) +
                                                   " leaves too few valid profiles (p_k must stay in (0,1])");
            }
            const std::size_t m = 2 + rng.below(std::min<std::size_t>(4, steps - 1));
            const auto counts = random_counts(steps, m, rng);
            const double p = 0.5 + 0.45 * rng.uniform();

            std::vector<double> z(m);
            double centre = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                z[k] = rng.normal();
                centre += static_cast<double>(counts[k]) * z[k];
            }
            centre /= static_cast<double>(steps);
            double sum_sq = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                z[k] -= centre;
                sum_sq += static_cast<double>(counts[k]) * z[k] * z[k];
            }
            if (sum_sq == 0.0) continue;
            const double scale = ratio * p / std::sqrt(sum_sq / static_cast<double>(steps));

            std::vector<CategoryGroup> groups;
            bool valid = true;
            for (std::size_t k = 0; k < m; ++k) {
                const double pk = p + scale * z[k];
                valid = valid && pk > 0.0 && pk <= 1.0;
                groups.push_back({counts[k], pk});
            }
            if (!valid) continue;

            const auto report = approximation_report(CategoryProfile(std::move(groups)));
            ++row.profiles;
            row.mean_relative_error_naive += report.relative_error_naive;
            row.mean_relative_error_corrected += report.relative_error_corrected;
            row.mean_bound_term += report.bound_term;
            row.max_relative_error_naive = std::max(row.max_relative_error_naive, report.relative_error_naive);
            row.max_relative_error_corrected =
                std::max(row.max_relative_error_corrected, report.relative_error_corrected);
        }
        const double count = static_cast<double>(row.profiles);
        row.mean_relative_error_naive /= count;
        row.mean_relative_error_corrected /= count;
        row.mean_bound_term /= count;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mocet
