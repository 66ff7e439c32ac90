#pragma once

#include <stdexcept>
#include <string>

namespace divtest {

// Base for every error thrown by the library. Catching divtest::Error is
// sufficient to intercept all validation and numeric failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- input validation ---

class NonPositiveEntry : public Error {
public:
    using Error::Error;
};

class NotNormalized : public Error {
public:
    using Error::Error;
};

class NonPositiveWeight : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

// Parameter outside a family's admissible range (e.g. Renyi order <= 0 or = 1).
class DomainError : public Error {
public:
    using Error::Error;
};

// --- numerics ---

class StepTooLarge : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class DegenerateHypotheses : public Error {
public:
    using Error::Error;
};

// --- enumeration / finite-n machinery ---

class SizeLimit : public Error {
public:
    using Error::Error;
};

class RadiusTooLarge : public Error {
public:
    using Error::Error;
};

class InfeasibleRounding : public Error {
public:
    using Error::Error;
};

// A divergence family that cannot evaluate boundary (zero-count) types was
// asked to do so.
class BoundaryEvaluation : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace divtest
