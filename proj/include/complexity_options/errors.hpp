#pragma once

#include <stdexcept>
#include <string>

namespace complexity_options {

/// A caller-supplied argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The request exceeds a configured exhaustive-search or enumeration limit.
class LimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace complexity_options
