#include "mocet/corpus.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "mocet/error.hpp"

namespace mocet {

using nlohmann::json;

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorKind::domain, "embedding must have dim >= 1", {}, "embedding");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::domain,
                        "embedding entry " + std::to_string(i) + " is not finite", {}, "embedding");
        }
    }
}

ReferenceCorpus::ReferenceCorpus(std::vector<ReferenceItem> items) : items_(std::move(items)) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto& item = items_[i];
        if (item.embedding.dim() == 0) {
            throw Error(ErrorKind::domain, "item '" + item.id + "' has an empty embedding", {}, "embedding");
        }
        if (i == 0) dim_ = item.embedding.dim();
        if (item.embedding.dim() != dim_) {
            throw Error(ErrorKind::dimension_mismatch,
                        "item '" + item.id + "' has dim " + std::to_string(item.embedding.dim()) +
                            ", corpus dim is " + std::to_string(dim_),
                        {}, "embedding");
        }
        if (item.outcome != 0 && item.outcome != 1) {
            throw Error(ErrorKind::domain, "item '" + item.id + "' outcome must be 0 or 1", {}, "outcome");
        }
        if (!seen.insert(item.id).second) {
            throw Error(ErrorKind::duplicate_id, "duplicate id '" + item.id + "'", {}, "id");
        }
    }
}

namespace {

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::optional<std::string> optional_string(const json& record, const char* key, std::optional<std::size_t> line) {
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw Error(ErrorKind::malformed, std::string("'") + key + "' must be a string", line, key);
    return it->get<std::string>();
}

std::string required_string(const json& record, const char* key, std::optional<std::size_t> line) {
    auto value = optional_string(record, key, line);
    if (!value) throw Error(ErrorKind::missing_field, std::string("missing '") + key + "'", line, key);
    return *value;
}

double required_number(const json& record, const char* key, std::optional<std::size_t> line) {
    auto it = record.find(key);
    if (it == record.end() || it->is_null()) {
        throw Error(ErrorKind::missing_field, std::string("missing '") + key + "'", line, key);
    }
    if (!it->is_number()) throw Error(ErrorKind::malformed, std::string("'") + key + "' must be a number", line, key);
    const double value = it->get<double>();
    if (!std::isfinite(value)) throw Error(ErrorKind::domain, std::string("'") + key + "' is not finite", line, key);
    return value;
}

EmbeddingVector parse_embedding(const json& value, std::optional<std::size_t> line) {
    if (!value.is_array()) throw Error(ErrorKind::malformed, "'embedding' must be an array", line, "embedding");
    std::vector<double> values;
    values.reserve(value.size());
    for (const auto& entry : value) {
        if (!entry.is_number()) {
            throw Error(ErrorKind::malformed, "'embedding' entries must be numbers", line, "embedding");
        }
        values.push_back(entry.get<double>());
    }
    try {
        return EmbeddingVector(std::move(values));
    } catch (const Error& e) {
        // Re-raise with the line attached.
        throw Error(e.kind(), e.what(), line, "embedding");
    }
}

json parse_object(const std::string& text, std::optional<std::size_t> line) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::malformed, std::string("invalid JSON: ") + e.what(), line);
    } catch (const json::out_of_range& e) {
        throw Error(ErrorKind::domain, std::string("number out of range: ") + e.what(), line);
    }
    if (!doc.is_object()) throw Error(ErrorKind::malformed, "expected a JSON object", line);
    return doc;
}

}  // namespace

ReferenceCorpus load_corpus(std::istream& in) {
    std::vector<ReferenceItem> items;
    std::unordered_set<std::string> ids;
    std::size_t dim = 0;
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
        ++line_no;
        if (blank(text)) continue;
        const json record = parse_object(text, line_no);

        ReferenceItem item;
        item.id = required_string(record, "id", line_no);
        item.text = optional_string(record, "text", line_no);
        item.category = optional_string(record, "category", line_no);

        auto emb = record.find("embedding");
        if (emb == record.end()) throw Error(ErrorKind::missing_field, "missing 'embedding'", line_no, "embedding");
        item.embedding = parse_embedding(*emb, line_no);

        auto outcome = record.find("outcome");
        if (outcome == record.end()) throw Error(ErrorKind::missing_field, "missing 'outcome'", line_no, "outcome");
        if (!outcome->is_number_integer() || (outcome->get<std::int64_t>() != 0 && outcome->get<std::int64_t>() != 1)) {
            throw Error(ErrorKind::domain, "'outcome' must be 0 or 1, got " + outcome->dump(), line_no, "outcome");
        }
        item.outcome = outcome->get<int>();

        if (items.empty()) {
            dim = item.embedding.dim();
        } else if (item.embedding.dim() != dim) {
            throw Error(ErrorKind::dimension_mismatch,
                        "embedding dim " + std::to_string(item.embedding.dim()) + " does not match corpus dim " +
                            std::to_string(dim),
                        line_no, "embedding");
        }
        if (!ids.insert(item.id).second) {
            throw Error(ErrorKind::duplicate_id, "duplicate id '" + item.id + "'", line_no, "id");
        }
        items.push_back(std::move(item));
    }
    return ReferenceCorpus(std::move(items));
}

void write_corpus(std::ostream& out, const ReferenceCorpus& corpus) {
    for (const auto& item : corpus.items()) {
        nlohmann::ordered_json record;
        record["id"] = item.id;
        if (item.text) record["text"] = *item.text;
        const auto values = item.embedding.values();
        record["embedding"] = std::vector<double>(values.begin(), values.end());
        record["outcome"] = item.outcome;
        if (item.category) record["category"] = *item.category;
        out << record.dump() << '\n';
    }
}

Protocol load_protocol(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (blank(text)) throw Error(ErrorKind::empty_input, "protocol document is empty");
    const json doc = parse_object(text, std::nullopt);

    Protocol protocol;
    protocol.scenario = required_string(doc, "scenario", {});

    auto harm = doc.find("harm");
    if (harm == doc.end() || !harm->is_object()) throw Error(ErrorKind::missing_field, "missing 'harm' object", {}, "harm");
    protocol.harm.weight = required_number(*harm, "weight", {});
    protocol.harm.occurrence_rate = required_number(*harm, "occurrence_rate", {});

    auto steps = doc.find("steps");
    if (steps == doc.end() || !steps->is_array()) {
        throw Error(ErrorKind::missing_field, "missing 'steps' array", {}, "steps");
    }
    for (std::size_t i = 0; i < steps->size(); ++i) {
        const json& raw = (*steps)[i];
        const std::string where = "step " + std::to_string(i);
        if (!raw.is_object()) throw Error(ErrorKind::malformed, where + " is not an object", {}, "steps");

        ProtocolStep step;
        step.id = required_string(raw, "id", {});
        const bool has_embedding = raw.contains("embedding") && !raw["embedding"].is_null();
        const bool has_category = raw.contains("category") && !raw["category"].is_null();
        const bool has_p = raw.contains("p") && !raw["p"].is_null();
        const int sources = int(has_embedding) + int(has_category) + int(has_p);
        if (sources != 1) {
            throw Error(ErrorKind::ambiguous_source,
                        "step '" + step.id + "' must carry exactly one of embedding, category, p (found " +
                            std::to_string(sources) + ")",
                        {}, "steps");
        }
        if (has_embedding) {
            step.source = parse_embedding(raw["embedding"], {});
        } else if (has_category) {
            step.source = CategoryLabel{required_string(raw, "category", {})};
        } else {
            step.source = FixedProbability{required_number(raw, "p", {})};
        }
        protocol.steps.push_back(std::move(step));
    }
    validate_protocol(protocol);
    return protocol;
}

void validate_protocol(const Protocol& protocol) {
    if (protocol.steps.empty()) throw Error(ErrorKind::empty_input, "protocol has no steps", {}, "steps");
    if (!(protocol.harm.weight >= 0.0) || !std::isfinite(protocol.harm.weight)) {
        throw Error(ErrorKind::domain, "harm weight must be a finite value >= 0", {}, "weight");
    }
    if (!(protocol.harm.occurrence_rate >= 0.0) || !std::isfinite(protocol.harm.occurrence_rate)) {
        throw Error(ErrorKind::domain, "occurrence_rate must be a finite value >= 0", {}, "occurrence_rate");
    }
    std::set<std::string> ids;
    for (const auto& step : protocol.steps) {
        if (!ids.insert(step.id).second) {
            throw Error(ErrorKind::duplicate_id, "duplicate step id '" + step.id + "'", {}, "id");
        }
        if (const auto* fixed = std::get_if<FixedProbability>(&step.source)) {
            if (!(fixed->p >= 0.0 && fixed->p <= 1.0)) {
                throw Error(ErrorKind::domain, "step '" + step.id + "' p must lie in [0,1]", {}, "p");
            }
        }
    }
}

ValidationReport validate_corpus(const ReferenceCorpus& corpus) {
    ValidationReport report;
    report.item_count = corpus.size();
    report.dim = corpus.dim();
    std::size_t successes = 0;
    for (const auto& item : corpus.items()) {
        successes += static_cast<std::size_t>(item.outcome);
        if (item.category) {
            ++report.category_counts[*item.category];
        } else {
            ++report.uncategorized;
        }
    }
    if (corpus.empty()) {
        report.issues.emplace_back("unusable for estimation: corpus is empty");
        return report;
    }
    report.base_rate = static_cast<double>(successes) / static_cast<double>(corpus.size());
    report.usable_for_estimation = true;
    if (successes == 0 || successes == corpus.size()) {
        report.issues.emplace_back("single outcome class: separation tests are undefined");
    }
    return report;
}

}  // namespace mocet
