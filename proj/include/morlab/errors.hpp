#pragma once

#include <stdexcept>
#include <string>

namespace morlab {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, mismatched moduli or dimensions, and violated invariants.
// The CLI maps these to exit code 2.
struct ValueError : Error {
    using Error::Error;
};

// Malformed or wrong-version artifact files. Exit code 2.
struct FormatError : Error {
    using Error::Error;
};

// A solver or attack determined that no answer exists. Exit code 3.
struct NoSolutionError : Error {
    using Error::Error;
};

// An iteration or size cap was reached before an answer was found. Reported
// distinctly from "no solution": the question stays open. Exit code 3.
struct CapExceededError : Error {
    using Error::Error;
};

}  // namespace morlab
