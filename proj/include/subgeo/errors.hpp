#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace subgeo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A function was evaluated outside its domain (log/sqrt of non-positive,
/// division by zero). Carries the offending point when known.
class EvalDomain : public Error {
public:
    explicit EvalDomain(const std::string& what, std::vector<double> point = {})
        : Error(what), point_(std::move(point)) {}
    const std::vector<double>& point() const { return point_; }

private:
    std::vector<double> point_;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// The submersion differential lost rank at a point.
class RankDrop : public Error {
public:
    explicit RankDrop(const std::string& what, std::vector<double> point = {})
        : Error(what), point_(std::move(point)) {}
    const std::vector<double>& point() const { return point_; }

private:
    std::vector<double> point_;
};

/// Geodesic integration left the chart domain at time t.
class BoundaryExit : public Error {
public:
    BoundaryExit(const std::string& what, double t) : Error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

class ProjectabilityViolation : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

class VariableOutOfRange : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace subgeo
