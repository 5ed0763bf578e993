#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bayestable {

// Raised when an argument lies outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised for a bad record in ingested data; carries the 0-based record index.
class RecordError : public std::runtime_error {
public:
    RecordError(std::int64_t index, const std::string& what)
        : std::runtime_error("record " + std::to_string(index) + ": " + what), index_(index) {}

    std::int64_t index() const noexcept { return index_; }

private:
    std::int64_t index_;
};

} // namespace bayestable
