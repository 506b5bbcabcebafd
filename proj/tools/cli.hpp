#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mocet/knn.hpp"

namespace mocet::cli {

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

struct RunConfig {
    std::string command;  // score | validate-corpus | error-report | inspect
    std::string corpus_path;
    std::string protocol_path;
    std::string profile_path;
    std::string output_path;  // empty: standard output
    std::size_t k = kDefaultK;
    std::vector<std::size_t> ks{10, 20, 40};
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    Metric metric = Metric::euclidean;
    std::string format = "json";
    bool exclude_self = false;
    std::size_t permutations = 9999;
    unsigned threads = 1;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

std::optional<std::string> process_env(const std::string& name);

// Parses argv (argv[0] is the program name) and executes one command.
// Reports go to `out` unless --out names a file; diagnostics go to `err` as a
// single line. Returns 0 on success, 1 on data/domain errors, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const EnvLookup& env = process_env);

int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mocet::cli
