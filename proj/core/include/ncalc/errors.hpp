#pragma once

#include <stdexcept>
#include <string>

namespace ncalc {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mixing elements of two different algebras.
struct AlgebraMismatch : Error {
    using Error::Error;
};

/// A declared algebra flag failed verification; the message names the
/// counterexample (basis triple, element, or sampled pair).
struct FlagContradiction : Error {
    using Error::Error;
};

/// Element has no two-sided inverse.
struct NotInvertible : Error {
    using Error::Error;
};

/// Linear map lies outside the span of every registered generator orbit.
struct NoRepresentation : Error {
    using Error::Error;
};

/// Operation requires an associative target algebra.
struct UnsupportedForNonassociative : Error {
    using Error::Error;
};

/// Requested truncation order too small for the requested tolerance.
struct InsufficientTruncation : Error {
    using Error::Error;
};

/// Malformed document (algebra spec, differential spec, expression text).
struct ParseError : Error {
    using Error::Error;
};

} // namespace ncalc
