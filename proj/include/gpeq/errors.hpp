#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpeq {

/// Violated precondition (dimension mismatch, malformed input, bad index).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a special function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Cholesky factorization of a covariance matrix failed.
class SingularGram : public std::runtime_error {
public:
    SingularGram(std::size_t pivot, const std::string& what)
        : std::runtime_error(what), pivot_(pivot) {}

    /// Zero-based index of the first non-positive (or numerically vanishing) pivot.
    [[nodiscard]] std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// Two spectral measures do not share the same atoms, which already implies orthogonality.
class AtomMismatch : public std::runtime_error {
public:
    AtomMismatch(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class OptimizationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gpeq
