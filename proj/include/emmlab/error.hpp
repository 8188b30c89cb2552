#pragma once

#include <stdexcept>
#include <string>

namespace emmlab {

// Base of every error raised by the library. The C API maps each subclass
// onto a distinct status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: unknown identifiers, broken invariants, bad config keys.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A caller broke an operation's precondition (e.g. non-adapted asset).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// An enumeration or construction would exceed its declared caps.
class BudgetError : public Error {
public:
    using Error::Error;
};

// No enumerated information structure admits an equivalent martingale measure.
class NoArbitrageError : public Error {
public:
    using Error::Error;
};

// Singular normal equations in the least-squares estimator.
class EstimationError : public Error {
public:
    using Error::Error;
};

// Index below the lag an information structure requires.
class RangeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace emmlab
