#pragma once

#include <stdexcept>
#include <string>

namespace qclat {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arithmetic on elements of different quadratic fields.
struct FieldMismatchError : Error {
    using Error::Error;
};

struct DivisionByZeroError : Error {
    using Error::Error;
};

// An exact operation whose result leaves the closed representation class.
struct ExactnessError : Error {
    using Error::Error;
};

// A window/point-count/search cap was hit; message names the required size.
struct CapExceededError : Error {
    using Error::Error;
};

// Malformed input file or point/rational literal.
struct ParseError : Error {
    using Error::Error;
};

// Numeric procedure failed to certify its result (non-convergent ladder,
// ambiguous match, verification miss, ...).
struct CertificationError : Error {
    using Error::Error;
};

} // namespace qclat
