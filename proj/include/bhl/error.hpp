#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace bhl {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, configuration values or file contents.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The standing assumption lambda > lambda_star does not hold.
class DissipativityViolation : public ConfigError {
public:
    DissipativityViolation(double lambda, double lambda_star);
    double lambda;
    double lambda_star;
};

/// Time step exceeds eps_star while the cap is enforced.
class StepTooLarge : public ConfigError {
public:
    StepTooLarge(double eps, double eps_star);
    double eps;
    double eps_star;
};

class SpaceMismatch : public Error {
public:
    using Error::Error;
};

class HorizonTooShort : public Error {
public:
    HorizonTooShort(double required, double available);
    double required;
    double available;
};

/// Base for failures of the numerics themselves. Carries the step index
/// when raised from inside a trajectory.
class NumericalFailure : public Error {
public:
    using Error::Error;
    std::optional<std::size_t> step_index;
};

class NoConvergence : public NumericalFailure {
public:
    NoConvergence(int iterations, double residual);
    int iterations;
    double residual;
};

class NonFinite : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

} // namespace bhl
