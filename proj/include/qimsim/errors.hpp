#pragma once

#include <stdexcept>
#include <string>

namespace qimsim {

// Base class for all qimsim failures so callers can catch the whole family.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A quadratic phase (lens chirp or Fresnel transfer function) is not
// representable on the sampling grid where the field carries energy.
struct SamplingViolation : Error {
    using Error::Error;
};

// Geometry for which a closed form diverges (e.g. f == d1' without a pupil).
struct DegenerateGeometry : Error {
    using Error::Error;
};

struct ModeAxisMismatch : Error {
    using Error::Error;
};

struct ParaxialViolation : Error {
    using Error::Error;
};

struct PairingOutOfRange : Error {
    using Error::Error;
};

struct EmptyPattern : Error {
    using Error::Error;
};

struct NoFringes : Error {
    using Error::Error;
};

struct NonCommutingFamily : Error {
    using Error::Error;
};

struct DimMismatch : Error {
    using Error::Error;
};

struct DimUnsupported : Error {
    using Error::Error;
};

struct NotTracePreserving : Error {
    using Error::Error;
};

struct NotMaximallyEntangled : Error {
    using Error::Error;
};

struct InvalidDistribution : Error {
    using Error::Error;
};

// Bad construction arguments (invariant violations on domain types).
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace qimsim
