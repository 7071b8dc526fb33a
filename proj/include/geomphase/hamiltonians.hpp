// hamiltonians.hpp — Hamiltonian models: the rotating-field two-level system
// in closed form, cubic-interpolated sampled matrix series, user callbacks,
// and adiabaticity diagnostics.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "geomphase/quantum.hpp"
#include "geomphase/time_grid.hpp"

namespace geomphase {

// Spin-half in a rotating magnetic field:
//   H(t) = -(omega0/2) [[cos(theta),            sin(theta) e^{-i omega t}],
//                       [sin(theta) e^{i omega t}, -cos(theta)          ]]
struct RotatingFieldParams {
    double omega0 = 1.0;  // coupling of moment and field strength, > 0
    double omega = 0.0;   // field rotation frequency, >= 0
    double theta = 0.0;   // tilt angle in [0, pi]

    // sqrt(omega0^2 + omega^2 + 2 omega0 omega cos(theta)); the oscillation
    // frequency of the exact amplitudes.
    double omega_bar() const;
    void validate() const;
};

// Matrix series on strictly increasing times, interpolated entrywise by a
// natural cubic spline and re-symmetrized on evaluation.
class SampledHamiltonian {
public:
    SampledHamiltonian(std::vector<double> times, std::vector<Eigen::MatrixXcd> matrices);

    int dim() const { return dim_; }
    double t_min() const { return times_.front(); }
    double t_max() const { return times_.back(); }
    int samples() const { return static_cast<int>(times_.size()); }
    const std::vector<double>& times() const { return times_; }
    const Eigen::MatrixXcd& sample(int s) const { return values_[static_cast<size_t>(s)]; }

    void evaluate_into(double t, Eigen::MatrixXcd& out) const;

private:
    int dim_ = 0;
    std::vector<double> times_;
    std::vector<Eigen::MatrixXcd> values_;   // symmetrized samples
    std::vector<Eigen::MatrixXcd> curvature_;  // spline second derivatives
};

// Parse the sampled-matrix JSON schema:
//   { "dim": N, "times": [...], "matrices": [ [[re, im], ...] row-major, ... ] }
// Samples must be Hermitian within 1e-10 or the whole file is rejected.
SampledHamiltonian load_sampled_hamiltonian(const std::string& path);
SampledHamiltonian parse_sampled_hamiltonian(std::istream& in);

// Closed union of the supported model kinds. Evaluation at any admissible t
// yields a Hermitian operator of fixed dimension; models are immutable.
class HamiltonianModel {
public:
    using Callback = std::function<Eigen::MatrixXcd(double)>;

    static HamiltonianModel rotating_field(const RotatingFieldParams& p);
    static HamiltonianModel sampled(SampledHamiltonian series);
    static HamiltonianModel analytic(int dim, Callback h_of_t);

    int dim() const { return dim_; }

    // Full validation (Hermiticity check + symmetrization).
    HermitianOperator evaluate(double t) const;

    // Hot path for integrators: fills `out` with the symmetrized matrix,
    // resizing if needed. Same domain checks as evaluate().
    void evaluate_into(double t, Eigen::MatrixXcd& out) const;

    const RotatingFieldParams* rotating_field() const;

    // Angular-frequency scale that output grids must resolve: omega_bar +
    // omega for the rotating field, the spectral range at the domain start
    // otherwise.
    double grid_rate() const;

    double domain_start() const;
    bool contains_time(double t) const;

private:
    struct Analytic {
        int dim;
        Callback fn;
    };
    HamiltonianModel() = default;

    std::variant<RotatingFieldParams, SampledHamiltonian, Analytic> body_;
    int dim_ = 0;
    mutable double grid_rate_cache_ = -1.0;
};

// Instantaneous eigenframe of the rotating-field model in the fixed analytic
// gauge that all of its closed forms are stated in. Level 0 is the +omega0/2
// eigenstate, level 1 the -omega0/2 one; the ordering is part of the gauge
// convention and deliberately not ascending.
Eigenframe rotating_field_eigenframe(const RotatingFieldParams& p, double t);

// <E_m | d/dt E_n> for the analytic rotating-field frame; time-independent.
Eigen::MatrixXcd rotating_field_connection(const RotatingFieldParams& p);

// Eigenframes along a grid plus optionally an analytic connection matrix
// <E_m|Edot_n>(t). Numeric builds are gauge-continued from the first frame.
struct EigenframeTrajectory {
    TimeGrid grid;
    std::vector<Eigenframe> frames;
    std::function<Eigen::MatrixXcd(double)> analytic_connection;

    int dim() const { return frames.empty() ? 0 : frames.front().dim(); }
    bool has_analytic_connection() const { return static_cast<bool>(analytic_connection); }
    const Eigenframe& at(int j) const { return frames[static_cast<size_t>(j)]; }
};

// Eigensolve at every grid point, gauge-fixed at the first point and
// gauge-continued forward. Propagates DegenerateSpectrum and
// ContinuationBreakdown.
EigenframeTrajectory eigenframe_trajectory(
    const HamiltonianModel& model, const TimeGrid& grid,
    GaugePolicy initial_gauge = GaugePolicy::LargestComponentRealPositive);

// Analytic frames (with analytic connection) for the rotating-field model.
EigenframeTrajectory rotating_field_eigenframes(const RotatingFieldParams& p,
                                                const TimeGrid& grid);

// Connection matrices D(t_j)_{mn} = <E_m(t_j)|Edot_n(t_j)> at each grid
// point: analytic when available, otherwise finite differences of the given
// order over the frame vectors.
std::vector<Eigen::MatrixXcd> frame_connections(const EigenframeTrajectory& frames,
                                                int fd_order = 4);

// Per-grid-time max over m != k of |<E_m|Edot_k>/(E_m - E_k)|. Derivatives
// use 2nd-order central differences (one-sided at the ends) on the
// gauge-continued (or analytic) frames; the diagnostic always goes through
// the numerical derivative so it reflects what a sampled model would see.
std::vector<double> adiabatic_constraint_ratios(const EigenframeTrajectory& frames, int k);
std::vector<double> adiabatic_constraint_ratios(const HamiltonianModel& model,
                                                int k, const TimeGrid& grid);

}  // namespace geomphase
