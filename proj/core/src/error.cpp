#include "mocet/error.hpp"

#include <utility>

namespace mocet {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::malformed: return "malformed";
        case ErrorKind::dimension_mismatch: return "dimension_mismatch";
        case ErrorKind::duplicate_id: return "duplicate_id";
        case ErrorKind::domain: return "domain";
        case ErrorKind::missing_field: return "missing_field";
        case ErrorKind::ambiguous_source: return "ambiguous_source";
        case ErrorKind::empty_input: return "empty_input";
        case ErrorKind::unknown_category: return "unknown_category";
        case ErrorKind::precondition: return "precondition";
    }
    return "unknown";
}

namespace {

std::string decorate(const std::string& message, std::optional<std::size_t> line) {
    if (!line) return message;
    return "line " + std::to_string(*line) + ": " + message;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<std::size_t> line,
             std::string field)
    : std::runtime_error(decorate(message, line)),
      kind_(kind),
      line_(line),
      field_(std::move(field)) {}

}  // namespace mocet
