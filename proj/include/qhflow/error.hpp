#pragma once

#include <stdexcept>
#include <string>

namespace qhflow {

// bad shapes / preconditions
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// malformed external input (json, csv, flags)
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// solver trouble: unbounded LP, singular basis, ...
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace qhflow
