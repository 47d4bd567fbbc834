#pragma once

#include <stdexcept>
#include <string>

namespace fatou {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Out-of-range argument or violated precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Quadrature failed to converge, ill-conditioned projection, and similar.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Kernel evaluated at its singular point.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// A sampled sup has no admissible sample to range over.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Point outside the domain of a geometric map.
class DomainError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fatou
