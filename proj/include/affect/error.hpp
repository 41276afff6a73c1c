#pragma once

#include <stdexcept>
#include <string>

namespace affect {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input failed validation. `where` names the offending location, e.g.
// "sessions.csv:14" or "/answers/3/pleasure_raw".
class ValidationError : public Error {
public:
    ValidationError(std::string where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class EmptySubgroupError : public Error {
public:
    using Error::Error;
};

// Cosine or correlation requested on a zero vector / constant series.
class UndefinedMeasureError : public Error {
public:
    using Error::Error;
};

}  // namespace affect
