#pragma once

#include <stdexcept>
#include <string>

namespace trekcalc {

// Input could not be parsed.  `line` is 1-based, or 0 when unknown.
struct ParseError : std::runtime_error {
    int line;
    explicit ParseError(const std::string& what, int line_ = 0)
        : std::runtime_error(what), line(line_) {}
};

// A documented precondition of an operation does not hold for this input
// (as opposed to malformed input or a programming error).
struct ConditionError : std::runtime_error {
    explicit ConditionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace trekcalc
