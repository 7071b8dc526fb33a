// evolution.hpp — exact time evolution of i d/dt psi = H(t) psi: adaptive
// embedded Runge-Kutta 5(4) with dense output, plus the rotating-field
// closed-form solution used as an analytic oracle.
#pragma once

#include <Eigen/Dense>

#include "geomphase/hamiltonians.hpp"
#include "geomphase/quantum.hpp"
#include "geomphase/time_grid.hpp"

namespace geomphase {

inline constexpr double kDefaultEvolveTol = 1e-10;
inline constexpr double kNormDriftLimit = 1e-8;

// State history on an output grid. States are raw integrator output: no
// renormalization is ever applied, the drift is reported instead.
struct Trajectory {
    TimeGrid grid;
    Eigen::MatrixXcd states;  // column j = psi(grid[j])
    double norm_drift = 0.0;  // max over grid of | ||psi|| - 1 |
    long accepted_steps = 0;
    long rejected_steps = 0;

    int dim() const { return static_cast<int>(states.rows()); }
    int points() const { return static_cast<int>(states.cols()); }
    StateVector state(int j) const { return StateVector::unchecked(states.col(j)); }
};

// Integrate from grid.t0() to grid.t1() with local error kept at `tol` per
// unit time (PI-controlled step size). Throws StiffnessError on step-size
// underflow and IntegrationAccuracyError if the final norm drift exceeds
// kNormDriftLimit.
Trajectory evolve(const HamiltonianModel& model, const StateVector& psi0,
                  const TimeGrid& grid, double tol = kDefaultEvolveTol);

// Exact rotating-field solution started in the level-0 eigenstate:
//   psi(t) = a(t) |E_1(t)> + b(t) |E_2(t)>,
//   a(t) = cos(wbar t/2) - i ((omega0 + omega cos theta)/wbar) sin(wbar t/2),
//   b(t) = i (omega sin theta / wbar) sin(wbar t/2),
// in the same fixed gauge as rotating_field_eigenframe.
StateVector closed_form_spin_state(const RotatingFieldParams& p, double t);

// The amplitude pair (a, b) above; |a|^2 + |b|^2 = 1 identically.
std::pair<cplx, cplx> closed_form_spin_amplitudes(const RotatingFieldParams& p, double t);

}  // namespace geomphase
