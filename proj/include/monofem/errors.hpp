#pragma once

#include <stdexcept>
#include <string>

namespace monofem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside its documented domain (lambda outside [0,1], zero counts, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Degenerate or inverted element mapping.
struct GeometryError : Error {
    using Error::Error;
};

/// Coefficient field violates positivity where the scheme samples it.
struct CoefficientError : Error {
    using Error::Error;
};

/// The M-matrix admissibility condition fails on some element.
struct AdmissibilityError : Error {
    using Error::Error;
};

/// Malformed input file; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

/// Linear solver breakdown: nonconvergence, indefiniteness, singularity.
struct SolverError : Error {
    using Error::Error;
};

/// M-matrix certification failed where a pipeline requires it.
struct CertificationError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace monofem
