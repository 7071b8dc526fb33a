// errors.hpp — exception hierarchy shared by all modules
#pragma once

#include <stdexcept>
#include <string>

namespace geomphase {

// Root of the library error hierarchy.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape/precondition violations on caller-supplied values.
struct InvalidArgument : Error {
    using Error::Error;
};

struct DimensionMismatch : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// Eigenvalue gap fell below the degeneracy tolerance.
struct DegenerateSpectrum : Error {
    using Error::Error;
};

// Frame overlap between adjacent grid points too small to track the gauge.
struct ContinuationBreakdown : Error {
    using Error::Error;
};

// Evaluation time outside a sampled model's domain.
struct DomainError : Error {
    using Error::Error;
};

// Malformed model file (bad JSON, wrong shapes, non-Hermitian samples).
struct ModelFormatError : Error {
    using Error::Error;
};

// Integrator finished but norm drift exceeded the trajectory contract.
struct IntegrationAccuracyError : Error {
    using Error::Error;
};

// Step size underflowed (or step budget exhausted) before reaching t1.
struct StiffnessError : Error {
    using Error::Error;
};

// |<psi(0)|psi(tau)>| below threshold; the endpoint argument is undefined.
struct OrthogonalEndpointsError : Error {
    using Error::Error;
};

// |C_k(t)| dropped too low for the eigenstate expansion to be meaningful.
struct AdiabaticityLost : Error {
    using Error::Error;
};

// A built-in cross-check between two independent routes disagreed.
struct CrossCheckError : Error {
    using Error::Error;
};

}  // namespace geomphase
