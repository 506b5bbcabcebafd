#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <vector>

namespace mocet {

struct CategoryGroup {
    std::size_t n = 0;  // steps sharing this probability
    double p = 0.0;     // in (0, 1]
};

class CategoryProfile {
public:
    // Throws Error(domain) for an empty profile, n == 0, or p outside (0, 1].
    explicit CategoryProfile(std::vector<CategoryGroup> groups);

    const std::vector<CategoryGroup>& groups() const noexcept { return groups_; }
    std::size_t total_steps() const noexcept { return total_steps_; }

private:
    std::vector<CategoryGroup> groups_;
    std::size_t total_steps_ = 0;
};

// How far a single pooled probability p^n is from the exact categorical
// product, together with the second-order correction
//   E[Y] ~= p^n * exp(-(1 / (2 p^2)) * sum n_k alpha_k^2).
// Products are evaluated in log space.
struct ErrorReport {
    double weighted_mean = 0.0;
    std::vector<double> deviations;  // alpha_k = p_k - p
    double exact_e_y = 0.0;
    double naive_approx = 0.0;
    double second_order_approx = 0.0;
    double relative_error_naive = 0.0;      // |naive - exact| / exact
    double relative_error_corrected = 0.0;  // |corrected - exact| / exact
    double bound_term = 0.0;                // (1 / (2 p^2)) * sum n_k alpha_k^2
    double deviation_ratio = 0.0;           // sqrt(sum n_k alpha_k^2 / n) / p
    double third_order_term = 0.0;          // sum n_k |alpha_k / p|^3
};

double weighted_mean_probability(const CategoryProfile& profile);

// Throws Error(precondition) unless p is the profile's weighted mean.
std::vector<double> deviations(const CategoryProfile& profile, double p);

ErrorReport approximation_report(const CategoryProfile& profile);

// Reads {"groups": [{"n": int, "p": real}, ...]}.
CategoryProfile load_profile(std::istream& in);

// Measured approximation error over random profiles whose weighted deviation
// ratio ||alpha|| / p is pinned to each requested value.
struct ErrorScalingRow {
    double deviation_ratio = 0.0;
    std::size_t steps = 0;
    std::size_t profiles = 0;
    double mean_relative_error_naive = 0.0;
    double max_relative_error_naive = 0.0;
    double mean_relative_error_corrected = 0.0;
    double max_relative_error_corrected = 0.0;
    double mean_bound_term = 0.0;
};

std::vector<ErrorScalingRow> error_scaling_table(std::span<const double> ratios, std::size_t steps,
                                                 std::size_t profiles, std::uint64_t seed);

}  // namespace mocet
