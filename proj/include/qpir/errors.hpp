#pragma once

#include <stdexcept>
#include <string>

namespace qpir {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two elements from different field instances were combined.
struct FieldMismatchError : Error {
    using Error::Error;
};

struct DivisionByZeroError : Error {
    using Error::Error;
};

// A scheme or code parameter violates a stated inequality. The message names it.
struct ParameterError : Error {
    using Error::Error;
};

// A code construction degenerated (trivial dual, repeated locators, ...).
struct DegenerateCodeError : Error {
    using Error::Error;
};

// A derived algebraic object failed its defining check at construction time.
struct ConstructionError : Error {
    using Error::Error;
};

struct SingularMatrixError : Error {
    using Error::Error;
};

// The exact simulator refuses dimensions beyond its configured limit.
struct SizeLimitError : Error {
    using Error::Error;
};

// The two simulation backends disagreed on a measurement outcome.
struct CertificationError : Error {
    using Error::Error;
};

// A floating-point quantity drifted outside its integrity tolerance.
struct NumericalError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace qpir
