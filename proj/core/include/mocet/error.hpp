#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mocet {

enum class ErrorKind {
    malformed,           // unparsable record or document
    dimension_mismatch,  // embedding dimension differs from the corpus / index
    duplicate_id,
    domain,              // value outside its allowed range
    missing_field,
    ambiguous_source,    // protocol step with zero or several probability sources
    empty_input,
    unknown_category,
    precondition,        // e.g. k larger than the corpus
};

const char* to_string(ErrorKind kind) noexcept;

// Data/domain error raised by every core module. Loaders attach the 1-based
// line number of the offending record and, where relevant, the field name.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<std::size_t> line = std::nullopt, std::string field = {});

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> line_;
    std::string field_;
};

}  // namespace mocet
