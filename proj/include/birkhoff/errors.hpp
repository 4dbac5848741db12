#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what = "division by zero") : Error(what) {}
};

struct NotHyperbolic : Error {
    explicit NotHyperbolic(const std::string& what) : Error(what) {}
};

struct RationalSpectrum : Error {
    explicit RationalSpectrum(const std::string& what) : Error(what) {}
};

struct CapExceeded : Error {
    explicit CapExceeded(const std::string& what) : Error(what) {}
};

struct NotPeriodicWithin : Error {
    explicit NotPeriodicWithin(const std::string& what) : Error(what) {}
};

struct BadMultiples : Error {
    explicit BadMultiples(const std::string& what) : Error(what) {}
};

// Signals an implementation bug: the exact shadow point must be rational.
struct IrrationalResidue : Error {
    explicit IrrationalResidue(const std::string& what) : Error(what) {}
};

struct ShadowBoundViolated : Error {
    explicit ShadowBoundViolated(const std::string& what) : Error(what) {}
};

struct DecayViolated : Error {
    explicit DecayViolated(const std::string& what) : Error(what) {}
};

struct NotCoprime : Error {
    explicit NotCoprime(const std::string& what) : Error(what) {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& what) : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace birkhoff
