#pragma once

#include <stdexcept>
#include <string>

namespace rdg {

// Base class for all library failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid mesh input: non-monotone breakpoints, too few elements, ...
class MeshError : public Error {
public:
    using Error::Error;
};

// A matrix that must be invertible is (numerically) singular.
class SingularMatrixError : public Error {
public:
    using Error::Error;
};

// A linear solve failed: exact zero pivot, iteration did not converge, ...
class SolveError : public Error {
public:
    using Error::Error;
};

// NaN/Inf detected in the evolving state.
class NonFiniteStateError : public Error {
public:
    using Error::Error;
};

// Bad argument outside numerical linear algebra: point outside the domain,
// unsupported order, malformed configuration.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

} // namespace rdg
