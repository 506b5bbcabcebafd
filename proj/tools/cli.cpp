#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "mocet/corpus.hpp"
#include "mocet/engine.hpp"
#include "mocet/error.hpp"
#include "mocet/error_analysis.hpp"
#include "mocet/report_json.hpp"
#include "mocet/validation.hpp"

namespace mocet::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string one_line(std::string text) {
    for (auto& c : text) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

void diagnose(std::ostream& err, const std::string& kind, const std::string& message,
              std::optional<std::size_t> line = std::nullopt, const std::string& field = {}) {
    err << "mocet: error kind=" << kind;
    if (line) err << " line=" << *line;
    if (!field.empty()) err << " field=" << field;
    err << " message=\"" << one_line(message) << "\"\n";
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    return in;
}

ReferenceCorpus read_corpus(const std::string& path) {
    auto in = open_input(path);
    return load_corpus(in);
}

Protocol read_protocol(const std::string& path) {
    auto in = open_input(path);
    return load_protocol(in);
}

bool needs_corpus(const Protocol& protocol) {
    for (const auto& step : protocol.steps) {
        if (!std::holds_alternative<FixedProbability>(step.source)) return true;
    }
    return false;
}

ordered_json config_echo(const RunConfig& config) {
    ordered_json j;
    j["command"] = config.command;
    if (config.command == "score") {
        j["corpus"] = config.corpus_path;
        j["protocol"] = config.protocol_path;
        j["k"] = config.k;
        j["trials"] = config.trials;
        j["seed"] = config.seed;
        j["metric"] = to_string(config.metric);
        j["exclude_self"] = config.exclude_self;
        j["format"] = config.format;
    } else if (config.command == "validate-corpus") {
        j["corpus"] = config.corpus_path;
        j["ks"] = config.ks;
        j["metric"] = to_string(config.metric);
        j["permutations"] = config.permutations;
        j["seed"] = config.seed;
    } else if (config.command == "error-report") {
        j["profile"] = config.profile_path;
    } else {
        j["corpus"] = config.corpus_path;
        if (!config.protocol_path.empty()) j["protocol"] = config.protocol_path;
    }
    return j;
}

ordered_json document(const RunConfig& config, ordered_json report) {
    ordered_json doc;
    doc["run_config"] = config_echo(config);
    doc["report"] = std::move(report);
    return doc;
}

std::string run_score(const RunConfig& config) {
    const Protocol protocol = read_protocol(config.protocol_path);
    std::optional<NeighborIndex> index;
    if (!config.corpus_path.empty()) {
        index.emplace(build_index(read_corpus(config.corpus_path), config.metric));
    } else if (needs_corpus(protocol)) {
        throw UsageError("protocol has embedding or category steps; --corpus is required");
    }

    ScoreConfig score;
    score.k = config.k;
    score.trials = config.trials;
    score.seed = config.seed;
    score.metric = config.metric;
    score.exclude_matching_ids = config.exclude_self;
    score.threads = config.threads;
    const MocetReport report = score_protocol(protocol, index ? &*index : nullptr, score);

    if (config.format == "csv") return csv_header() + '\n' + csv_row(report) + '\n';
    return document(config, to_json(report)).dump(2) + '\n';
}

std::string run_validate(const RunConfig& config) {
    const ReferenceCorpus corpus = read_corpus(config.corpus_path);
    const SeparationOptions options{.permutations = config.permutations, .seed = config.seed};
    const auto results = k_sweep(corpus, config.ks, config.metric, config.threads, options);
    std::string out;
    for (const auto& result : results) out += document(config, to_json(result)).dump() + '\n';
    return out;
}

std::string run_error_report(const RunConfig& config) {
    auto in = open_input(config.profile_path);
    const auto report = approximation_report(load_profile(in));
    return document(config, to_json(report)).dump(2) + '\n';
}

std::string run_inspect(const RunConfig& config) {
    const ReferenceCorpus corpus = read_corpus(config.corpus_path);
    auto report = to_json(validate_corpus(corpus));
    if (!config.protocol_path.empty()) {
        const Protocol protocol = read_protocol(config.protocol_path);
        ordered_json summary;
        summary["scenario"] = protocol.scenario;
        summary["steps"] = protocol.steps.size();
        std::size_t compatible = 0;
        for (const auto& step : protocol.steps) {
            if (const auto* e = std::get_if<EmbeddingVector>(&step.source)) {
                if (e->dim() != corpus.dim()) {
                    throw Error(ErrorKind::dimension_mismatch, "step '" + step.id + "' has dim " +
                                                                   std::to_string(e->dim()) + ", corpus dim is " +
                                                                   std::to_string(corpus.dim()));
                }
                ++compatible;
            } else if (const auto* c = std::get_if<CategoryLabel>(&step.source)) {
                estimate_categorical_probability(corpus, c->name);
            }
        }
        summary["embedding_steps"] = compatible;
        report["protocol"] = summary;
    }
    return document(config, report).dump(2) + '\n';
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
    if (const char* value = std::getenv(name.c_str())) return std::string(value);
    return std::nullopt;
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        if (config.k == 0) throw UsageError("--k must be >= 1");
        if (config.trials == 0) throw UsageError("--trials must be >= 1");
        if (config.format != "json" && config.format != "csv") throw UsageError("--format must be json or csv");
        if (config.format == "csv" && config.command != "score") throw UsageError("--format csv applies to score only");

        std::string text;
        if (config.command == "score") {
            text = run_score(config);
        } else if (config.command == "validate-corpus") {
            text = run_validate(config);
        } else if (config.command == "error-report") {
            text = run_error_report(config);
        } else if (config.command == "inspect") {
            text = run_inspect(config);
        } else {
            throw UsageError("unknown command '" + config.command + "'");
        }

        if (config.output_path.empty()) {
            out << text;
            out.flush();
        } else {
            std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
            if (!file) throw IoError("cannot write '" + config.output_path + "'");
            file << text;
            if (!file.flush()) throw IoError("failed writing '" + config.output_path + "'");
        }
        return kOk;
    } catch (const UsageError& e) {
        diagnose(err, "usage", e.what());
        return kUsageError;
    } catch (const IoError& e) {
        diagnose(err, "io", e.what());
        return kDataError;
    } catch (const Error& e) {
        diagnose(err, to_string(e.kind()), e.what(), e.line(), e.field());
        return kDataError;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    CLI::App app{"MOCET risk scoring engine", "mocet"};
    app.require_subcommand(1);
    RunConfig config;
    std::optional<std::uint64_t> seed;
    std::string metric = "euclidean";

    auto add_metric = [&](CLI::App* sub) {
        sub->add_option("--metric", metric, "Distance metric")
            ->check(CLI::IsMember({"euclidean", "cosine"}))
            ->capture_default_str();
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", config.output_path, "Write the report to this file instead of stdout");
        sub->add_option("--threads", config.threads, "Worker threads (0 = all cores); results do not depend on it")
            ->capture_default_str();
    };

    auto* score = app.add_subcommand("score", "Score a protocol against a reference corpus");
    score->add_option("--corpus", config.corpus_path, "Reference corpus (JSON lines)");
    score->add_option("--protocol", config.protocol_path, "Protocol document")->required();
    score->add_option("--k", config.k, "Neighbours per step estimate")->capture_default_str();
    score->add_option("--trials", config.trials, "Monte Carlo trials")->capture_default_str();
    score->add_option("--seed", seed, "Random seed (falls back to MOCET_SEED, then 0)");
    score->add_option("--format", config.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    score->add_flag("--exclude-self", config.exclude_self,
                    "Leave a corpus item out of a step's neighbourhood when its id equals the step id");
    add_metric(score);
    add_common(score);

    auto* validate = app.add_subcommand("validate-corpus", "Leave-one-out k-NN separation test per k");
    validate->add_option("--corpus", config.corpus_path, "Reference corpus (JSON lines)")->required();
    validate->add_option("--k", config.ks, "Comma-separated neighbourhood sizes")->delimiter(',')->capture_default_str();
    validate->add_option("--permutations", config.permutations, "Outcome permutations for p_value_u (0 = normal approximation)")
        ->capture_default_str();
    validate->add_option("--seed", seed, "Seed for the permutation check");
    add_metric(validate);
    add_common(validate);

    auto* error_report = app.add_subcommand("error-report", "Pooled-probability approximation error of a profile");
    error_report->add_option("--profile", config.profile_path, "Profile document")->required();
    error_report->add_option("--out", config.output_path, "Write the report to this file instead of stdout");

    auto* inspect = app.add_subcommand("inspect", "Summarize a corpus and optionally check a protocol against it");
    inspect->add_option("--corpus", config.corpus_path, "Reference corpus (JSON lines)")->required();
    inspect->add_option("--protocol", config.protocol_path, "Protocol document to check");
    inspect->add_option("--out", config.output_path, "Write the report to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        diagnose(err, "usage", e.what());
        return kUsageError;
    }

    config.command = app.get_subcommands().front()->get_name();
    config.metric = parse_metric(metric);
    if (seed) {
        config.seed = *seed;
    } else if (auto from_env = env("MOCET_SEED")) {
        try {
            std::size_t used = 0;
            config.seed = std::stoull(*from_env, &used);
            if (used != from_env->size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            diagnose(err, "usage", "MOCET_SEED must be an unsigned integer, got '" + *from_env + "'");
            return kUsageError;
        }
    }
    return execute(config, out, err);
}

}  // namespace mocet::cli
