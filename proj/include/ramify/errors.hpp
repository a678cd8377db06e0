#pragma once

#include <stdexcept>
#include <string>

namespace ramify {

// Error taxonomy. Every failure mode that callers are expected to branch on
// gets its own type; everything else is a plain Error.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
    using Error::Error;
};

// Raised whenever a certified claim cannot be established with the required
// guard slack at the current precision. Callers must treat this as "retry at
// higher precision", never as a value.
struct PrecisionExhausted : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};
struct FieldMismatch : Error {
    using Error::Error;
};
struct NotMonic : Error {
    using Error::Error;
};
struct ZeroElement : Error {
    using Error::Error;
};
struct NegativeValuation : Error {
    using Error::Error;
};
struct HenselHypothesisFailed : Error {
    using Error::Error;
};

struct ActionNotClosed : Error {
    using Error::Error;
};
struct NotARoot : Error {
    using Error::Error;
};
struct DegreeMismatch : Error {
    using Error::Error;
};
struct GeneratorSearchFailed : Error {
    using Error::Error;
};
struct NotCaseIII : Error {
    using Error::Error;
};
struct NotMonogenic : Error {
    using Error::Error;
};

struct AssertionFailed : Error {
    using Error::Error;
};
struct EquivalenceViolation : Error {
    using Error::Error;
};
struct NoDecomposition : Error {
    using Error::Error;
};

struct NotDegreeOne : Error {
    using Error::Error;
};
struct NotFaithful : Error {
    using Error::Error;
};
struct NotWellRamified : Error {
    using Error::Error;
};
struct NotAbelian : Error {
    using Error::Error;
};
struct ConductorMismatch : Error {
    using Error::Error;
};
struct DepthMismatch : Error {
    using Error::Error;
};
struct NonIntegralInstance : Error {
    using Error::Error;
};
struct IdentityViolation : Error {
    using Error::Error;
};

struct UnknownSuite : Error {
    using Error::Error;
};
struct UnknownName : Error {
    using Error::Error;
};

} // namespace ramify
