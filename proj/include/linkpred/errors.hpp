#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace linkpred {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Malformed trace input; `line()` is 1-based and counts the header.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(what + " at line " + std::to_string(line)), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// beta * spectral_radius(X) is too close to (or above) 1 for the Katz
/// series to converge. For distributed scoring `node()` names the local
/// view that failed.
class BetaTooLarge : public Error {
public:
    BetaTooLarge(double beta, double rho, std::optional<std::size_t> node = std::nullopt);
    double beta() const noexcept { return beta_; }
    double rho() const noexcept { return rho_; }
    std::optional<std::size_t> node() const noexcept { return node_; }

private:
    double beta_;
    double rho_;
    std::optional<std::size_t> node_;
};

/// Dense closed-form scoring was requested above the dense size limit.
class DenseLimitExceeded : public Error {
public:
    using Error::Error;
};

class NoPositives : public Error {
public:
    NoPositives() : Error("candidate set contains no positive pair") {}
};

class NoNegatives : public Error {
public:
    NoNegatives() : Error("candidate set contains no negative pair") {}
};

}  // namespace linkpred
