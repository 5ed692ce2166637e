#pragma once

#include <stdexcept>
#include <string>

namespace isospec {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid grid construction or a function/grid mismatch.
class GridError : public Error {
public:
    explicit GridError(const std::string& what) : Error(what) {}
};

/// Precondition violation on an operation's inputs.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// The deformation parameter lies in (or touches) the singular band.
///
/// For a normalized zero mode the band is the closed interval [-1, 0]:
/// lambda = -1 is the Abraham-Moses limit, lambda = 0 the Pursey limit,
/// and everywhere in between I0(x) + lambda crosses zero.
class SingularBandError : public Error {
public:
    SingularBandError(double lambda, const std::string& what)
        : Error(what), lambda_(lambda) {}
    double lambda() const { return lambda_; }

private:
    double lambda_;
};

/// Eigensolver failed to converge or produced a degenerate pair.
class EigensolverError : public Error {
public:
    explicit EigensolverError(const std::string& what) : Error(what) {}
};

/// Overflow, non-finite intermediate, or an unreliable numerical result.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

/// Malformed input file or unwritable output.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace isospec
