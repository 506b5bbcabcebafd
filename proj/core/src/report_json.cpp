#include "mocet/report_json.hpp"

#include <charconv>

namespace mocet {

ordered_json to_json(const StepProbabilityEstimate& estimate) {
    ordered_json j;
    j["id"] = estimate.step_id;
    j["source"] = to_string(estimate.source);
    j["p"] = estimate.p;
    if (estimate.source == EstimateSource::knn) {
        j["k_used"] = estimate.k_used;
        j["neighbor_ids"] = estimate.neighbor_ids;
    }
    return j;
}

ordered_json to_json(const SimulationResult& simulation) {
    ordered_json j;
    j["trials"] = simulation.trials;
    j["successes"] = simulation.successes;
    j["mean"] = simulation.mean;
    j["std_error"] = simulation.std_error;
    j["seed"] = simulation.seed;
    return j;
}

ordered_json to_json(const MocetReport& report) {
    ordered_json j;
    j["scenario"] = report.scenario;
    j["harm"] = {{"weight", report.harm.weight}, {"occurrence_rate", report.harm.occurrence_rate}};
    j["steps"] = ordered_json::array();
    for (const auto& step : report.steps) j["steps"].push_back(to_json(step));
    j["e_y"] = report.e_y;
    j["simulation"] = to_json(report.simulation);
    j["mocet"] = report.mocet;
    j["cumulative_mocet"] = report.cumulative_mocet;
    j["mocet_monte_carlo"] = report.mocet_monte_carlo;
    j["cumulative_mocet_monte_carlo"] = report.cumulative_mocet_monte_carlo;
    j["config"] = {{"k", report.config.k},
                   {"trials", report.config.trials},
                   {"seed", report.config.seed},
                   {"metric", to_string(report.config.metric)},
                   {"exclude_matching_ids", report.config.exclude_matching_ids}};
    return j;
}

ordered_json to_json(const ErrorReport& report) {
    ordered_json j;
    j["weighted_mean"] = report.weighted_mean;
    j["deviations"] = report.deviations;
    j["exact_e_y"] = report.exact_e_y;
    j["naive_approx"] = report.naive_approx;
    j["second_order_approx"] = report.second_order_approx;
    j["relative_error_naive"] = report.relative_error_naive;
    j["relative_error_corrected"] = report.relative_error_corrected;
    j["bound_term"] = report.bound_term;
    j["deviation_ratio"] = report.deviation_ratio;
    j["third_order_term"] = report.third_order_term;
    return j;
}

ordered_json to_json(const SeparationResult& result) {
    ordered_json j;
    j["k"] = result.k;
    j["n_correct"] = result.n_correct;
    j["n_incorrect"] = result.n_incorrect;
    j["mean_p_correct"] = result.mean_p_correct;
    j["mean_p_incorrect"] = result.mean_p_incorrect;
    j["std_error_correct"] = result.std_error_correct;
    j["std_error_incorrect"] = result.std_error_incorrect;
    j["u_statistic"] = result.u_statistic;
    j["p_value_u"] = result.p_value_u;
    j["p_value_u_normal"] = result.p_value_u_normal;
    j["permutations"] = result.permutations;
    j["t_statistic"] = result.t_statistic;
    j["welch_df"] = result.welch_df;
    j["p_value_t"] = result.p_value_t;
    j["auc"] = result.auc;
    return j;
}

ordered_json to_json(const ValidationReport& report) {
    ordered_json j;
    j["item_count"] = report.item_count;
    j["dim"] = report.dim;
    j["base_rate"] = report.base_rate;
    j["category_counts"] = ordered_json::object();
    for (const auto& [name, count] : report.category_counts) j["category_counts"][name] = count;
    j["uncategorized"] = report.uncategorized;
    j["usable_for_estimation"] = report.usable_for_estimation;
    j["issues"] = report.issues;
    return j;
}

std::string csv_header() { return "scenario,e_y,mocet,cumulative_mocet,k,trials,seed"; }

namespace {

std::string quote_csv(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string format_real(double value) {
    // Shortest representation that round-trips.
    char buffer[40];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

}  // namespace

std::string csv_row(const MocetReport& report) {
    return quote_csv(report.scenario) + ',' + format_real(report.e_y) + ',' + format_real(report.mocet) + ',' +
           format_real(report.cumulative_mocet) + ',' + std::to_string(report.config.k) + ',' +
           std::to_string(report.config.trials) + ',' + std::to_string(report.config.seed);
}

}  // namespace mocet
