#pragma once

#include <stdexcept>
#include <string>

namespace qdef {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can separate library faults from std exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroDivision : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
    using Error::Error;
};

class ZeroScalar : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

// Raised when two routes that must agree mathematically disagree numerically.
// This always points at a bug in the implementation.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class SingularLeadingCoefficient : public Error {
public:
    SingularLeadingCoefficient(std::size_t row)
        : Error("leading band coefficient is singular at row " + std::to_string(row)), row_(row) {}
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

class StabilityViolation : public Error {
public:
    using Error::Error;
};

class ConfigParse : public Error {
public:
    using Error::Error;
};

} // namespace qdef
