#pragma once

#include <stdexcept>
#include <string>

namespace multihom {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched variable counts or vector/matrix dimensions.
struct DimensionError : Error {
    using Error::Error;
};

// Polynomial text that does not conform to the input grammar.
struct ParseError : Error {
    int column;  // 1-based position in the input text
    ParseError(const std::string& msg, int col)
        : Error(msg + " (column " + std::to_string(col) + ")"), column(col) {}
};

// Jet inversion of something with zero constant term.
struct NotAUnitError : Error {
    using Error::Error;
};

// Coordinate change with a constant term or singular linear part.
struct InvalidChangeError : Error {
    using Error::Error;
};

// Input germ outside the domain of an operation (constant term, zero, ...).
struct InvalidGermError : Error {
    using Error::Error;
};

// A candidate semisimple element has eigenvalues outside Q.
struct UnsupportedSpectrumError : Error {
    using Error::Error;
};

// A family expected to commute does not.
struct CommutationError : Error {
    using Error::Error;
};

// Input rejected by a guard (smooth factor, non-reduced one-variable germ, ...).
// Maps to CLI exit code 2.
struct RefusalError : Error {
    using Error::Error;
};

// Bad analysis configuration or a hard resource cap exceeded.
struct ConfigError : Error {
    using Error::Error;
};

// An elimination step that theory says must succeed did not; carries a
// diagnostic state dump. Maps to CLI exit code 1.
struct ObstructionError : Error {
    std::string dump;
    ObstructionError(const std::string& msg, std::string state_dump = "")
        : Error(msg), dump(std::move(state_dump)) {}
};

// The stabilization sweep hit its m_max bound without settling.
struct StabilizationError : Error {
    using Error::Error;
};

// An operation was called in coordinates that violate its precondition
// (e.g. a non-diagonal semisimple part where diagonal weights are needed).
struct InvalidStateError : Error {
    using Error::Error;
};

// Supplied factors do not multiply to the normalized equation up to a unit.
struct FactorizationError : Error {
    using Error::Error;
};

// A supplied factor is spread over several joint weights.
struct NonEquivariantFactorError : Error {
    using Error::Error;
};

}  // namespace multihom
