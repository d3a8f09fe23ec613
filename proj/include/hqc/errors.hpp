#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "hqc/vec.hpp"

namespace hqc {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    Error(const std::string& what, const Vec& point)
        : std::runtime_error(what + " at " + to_string(point)), point_(point) {}

    /// Offending point, when the failure is attached to one.
    const std::optional<Vec>& point() const { return point_; }

private:
    std::optional<Vec> point_;
};

/// Argument outside the open set where an operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A point lies outside a DomainSpec. Carries the violated constraint.
class OutsideDomainError : public DomainError {
public:
    OutsideDomainError(const std::string& constraint, const Vec& point)
        : DomainError("outside domain: violates " + constraint, point), constraint_(constraint) {}
    const std::string& constraint() const { return constraint_; }

private:
    std::string constraint_;
};

/// Two objects of different ambient dimension were combined.
class DimensionError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Polynomial offered as harmonic has a nonzero Laplacian.
class HarmonicityError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// The representation cannot provide the requested derivative order.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Quadrature or iteration did not reach the requested accuracy.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Non-positive Jacobian (or Hessian determinant) where positivity is required.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Map value lands outside its declared target.
class RangeError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

/// Grid graph too coarse to contain a usable node set.
class ResolutionError : public Error {
public:
    using Error::Error;
};

class ConnectivityError : public Error {
public:
    using Error::Error;
};

/// Malformed input document; `location` is a JSON pointer or byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& location, const std::string& message)
        : Error("parse error at " + location + ": " + message), location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

}  // namespace hqc
