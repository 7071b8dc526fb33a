// quantum.hpp — states, Hermitian operators, gauge-fixed eigensystems, and
// ray-space distance. Everything here is a pure function over immutable
// values; concurrent use needs no coordination.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "geomphase/errors.hpp"
#include "geomphase/numerics.hpp"

namespace geomphase {

inline constexpr double kStateNormTol = 1e-9;
inline constexpr double kHermitianAsymTol = 1e-10;
inline constexpr double kDegeneracyRelTol = 1e-8;
inline constexpr double kContinuationMinOverlap = 0.1;

// How eigenvector phases are fixed at a single time point.
enum class GaugePolicy {
    // Rotate each vector so its largest-magnitude component is real and
    // positive; magnitude ties (within 1e-12) break toward the lowest index.
    LargestComponentRealPositive,
    // Whatever the solver returned.
    Raw,
};

// Unit-norm pure state of dimension >= 2.
class StateVector {
public:
    explicit StateVector(Eigen::VectorXcd amplitudes);

    // Skips the unit-norm check (integrator output carries its norm drift
    // openly instead of hiding it behind renormalization).
    static StateVector unchecked(Eigen::VectorXcd amplitudes);

    int dim() const { return static_cast<int>(v_.size()); }
    const Eigen::VectorXcd& amplitudes() const { return v_; }
    cplx operator[](int i) const { return v_[i]; }
    double norm() const { return v_.norm(); }

private:
    StateVector() = default;
    Eigen::VectorXcd v_;
};

// Hermitian N x N operator in angular-frequency units (hbar = 1). Inputs
// with asymmetry up to 1e-10 are symmetrized as (H + H^dag)/2; anything
// worse is rejected.
class HermitianOperator {
public:
    explicit HermitianOperator(const Eigen::MatrixXcd& entries);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    double frobenius_norm() const { return m_.norm(); }

private:
    Eigen::MatrixXcd m_;
};

// Ordered eigenvalues and orthonormal eigenvectors of H(t) at one time.
struct Eigenframe {
    double time = 0.0;
    Eigen::VectorXd energies;   // one per level
    Eigen::MatrixXcd vectors;   // column m is the level-m eigenvector

    int dim() const { return static_cast<int>(energies.size()); }
    StateVector vector(int m) const;
};

// <a|b>, conjugate-linear in the first argument.
cplx inner_product(const StateVector& a, const StateVector& b);

// Instantaneous eigensystem, eigenvalues ascending, gauge fixed per policy.
// Throws DegenerateSpectrum when the minimum gap is below
// kDegeneracyRelTol * (spectral range).
Eigenframe eigensystem(const HermitianOperator& H,
                       GaugePolicy gauge = GaugePolicy::LargestComponentRealPositive,
                       double time = 0.0);

// Rotate each vector of `cur` by a unit phase so that <prev_m|cur_m> is real
// and positive. Levels pair by position (energies never cross; degeneracy is
// an error upstream). Throws ContinuationBreakdown when an overlap magnitude
// drops below kContinuationMinOverlap.
Eigenframe gauge_continue(const Eigenframe& prev, const Eigenframe& cur);

// Frobenius norm of |psi><psi| - |phi><phi|; invariant under global phases
// on either argument.
double projector_deviation(const StateVector& psi, const StateVector& phi);

}  // namespace geomphase
