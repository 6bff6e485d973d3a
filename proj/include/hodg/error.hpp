#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hodg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class TopologyError : public Error {
public:
    using Error::Error;
};

/// Non-positive density or pressure. `where` names the cell/face and the
/// iteration at which it was detected.
class AdmissibilityError : public Error {
public:
    AdmissibilityError(const std::string& what, std::int64_t entity = -1,
                       std::int64_t iteration = -1)
        : Error(what), entity_(entity), iteration_(iteration) {}
    std::int64_t entity() const noexcept { return entity_; }
    std::int64_t iteration() const noexcept { return iteration_; }

private:
    std::int64_t entity_;
    std::int64_t iteration_;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::int64_t last_good)
        : Error(what), last_good_(last_good) {}
    std::int64_t last_good_iteration() const noexcept { return last_good_; }

private:
    std::int64_t last_good_;
};

}  // namespace hodg
