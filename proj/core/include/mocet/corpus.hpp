#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mocet {

// Dense embedding of one step description. Entries are always finite doubles.
class EmbeddingVector {
public:
    EmbeddingVector() = default;
    // Throws Error(domain) on an empty vector or a non-finite entry.
    explicit EmbeddingVector(std::vector<double> values);

    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

private:
    std::vector<double> values_;
};

struct ReferenceItem {
    std::string id;
    std::optional<std::string> text;  // carried through, never used in computation
    EmbeddingVector embedding;
    int outcome = 0;                  // 1 success, 0 failure
    std::optional<std::string> category;

    friend bool operator==(const ReferenceItem&, const ReferenceItem&) = default;
};

// Labeled historical steps sharing one embedding dimension. Ids are unique.
class ReferenceCorpus {
public:
    ReferenceCorpus() = default;
    // Validates the invariants (shared dim, unique ids, binary outcomes).
    explicit ReferenceCorpus(std::vector<ReferenceItem> items);

    const std::vector<ReferenceItem>& items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    // 0 for an empty corpus.
    std::size_t dim() const noexcept { return dim_; }

    friend bool operator==(const ReferenceCorpus&, const ReferenceCorpus&) = default;

private:
    std::vector<ReferenceItem> items_;
    std::size_t dim_ = 0;
};

struct HarmModel {
    double weight = 0.0;           // expected casualties per successful incident
    double occurrence_rate = 0.0;  // incidents per annum
};

struct FixedProbability {
    double p = 0.0;
};

struct CategoryLabel {
    std::string name;
};

using ProbabilitySource = std::variant<EmbeddingVector, CategoryLabel, FixedProbability>;

struct ProtocolStep {
    std::string id;
    ProbabilitySource source;
};

struct Protocol {
    std::string scenario;
    std::vector<ProtocolStep> steps;
    HarmModel harm;
};

struct ValidationReport {
    std::size_t item_count = 0;
    std::size_t dim = 0;
    double base_rate = 0.0;  // mean outcome, 0 for an empty corpus
    std::map<std::string, std::size_t> category_counts;
    std::size_t uncategorized = 0;
    bool usable_for_estimation = false;
    std::vector<std::string> issues;
};

// One JSON object per line; blank lines are skipped. Errors carry the line number.
ReferenceCorpus load_corpus(std::istream& in);
void write_corpus(std::ostream& out, const ReferenceCorpus& corpus);

Protocol load_protocol(std::istream& in);
// Checks step count, unique step ids, fixed probabilities and harm ranges.
void validate_protocol(const Protocol& protocol);

ValidationReport validate_corpus(const ReferenceCorpus& corpus);

}  // namespace mocet
