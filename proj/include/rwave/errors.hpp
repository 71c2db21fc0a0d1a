#pragma once

#include <stdexcept>
#include <string>

namespace rwave {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// State outside the model's admissible region (e.g. nonpositive density).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Eigenvalue collision or complex pair: strict hyperbolicity lost.
class HyperbolicityError : public Error {
public:
    using Error::Error;
};

/// Riemann data incompatible with the all-shocks-plus-one-contact pattern.
class PatternError : public Error {
public:
    using Error::Error;
};

/// Iteration failed to converge; carries the residual history in the message.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Operation called outside its contract.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Wave-jump matrix singular (a zero-strength family).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Integral-curve construction failed.
class CurveError : public Error {
public:
    using Error::Error;
};

/// Traveling-wave profile construction failed (no connecting orbit found).
class ProfileError : public Error {
public:
    using Error::Error;
};

/// Weight-function construction failed (characteristic gap changed sign).
class WeightError : public Error {
public:
    using Error::Error;
};

/// Initial/boundary data violates a setup requirement.
class SetupError : public Error {
public:
    using Error::Error;
};

/// NaN/overflow detected during time integration.
class BlowUpError : public Error {
public:
    explicit BlowUpError(const std::string& what, double t)
        : Error(what), time(t) {}
    double time;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace rwave
