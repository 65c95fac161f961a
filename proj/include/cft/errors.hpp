#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cft {

// Base class for all workbench errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Expression text is malformed; `offset` is the byte position of the problem.
struct ParseError : Error {
    ParseError(std::string msg, std::size_t offset_)
        : Error(std::move(msg) + " at offset " + std::to_string(offset_)), offset(offset_) {}
    std::size_t offset;
};

// Evaluation outside a function's domain (sqrt/ln of a non-positive value,
// division by zero, |x| at x=0 in a jet, ...).
struct DomainError : Error {
    using Error::Error;
};

// A referenced parameter has no bound value.
struct UnboundParameterError : Error {
    explicit UnboundParameterError(const std::string& name)
        : Error("unbound parameter '" + name + "'") {}
};

// Bad surface description, catalog name, parameter value, range, ...
struct InputError : Error {
    using Error::Error;
};

// The Gaussian curvature vanishes at a sampled point; the second-form
// operator is undefined there and the surface class is excluded.
struct FlatPointError : Error {
    using Error::Error;
};

// sin(phi) or phi' vanishes: the revolution closed form blows up.
struct SingularPointError : Error {
    using Error::Error;
};

// |p'^2 + q'^2 - 1| exceeded arc_tol where an arc-length profile was required.
struct ArcLengthError : Error {
    using Error::Error;
};

// Profile speed fell below the degeneracy threshold.
struct DegenerateProfileError : Error {
    using Error::Error;
};

// The sample geometry cannot determine A (all points coplanar through 0).
struct RankDeficientError : Error {
    using Error::Error;
};

// An internal cross-check between two independent formulas failed, or a
// symbolic step violated its postcondition.  CLI exit code 3.
struct VerificationError : Error {
    using Error::Error;
};

} // namespace cft
