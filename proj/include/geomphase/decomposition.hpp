// decomposition.hpp — expansion of an exact trajectory over instantaneous
// eigenframes, the epsilon-split of the coefficients, the five-term
// correction that separates the exact from the adiabatic geometric phase,
// and the reconstruction identity check.
#pragma once

#include "geomphase/evolution.hpp"
#include "geomphase/hamiltonians.hpp"
#include "geomphase/phase.hpp"

namespace geomphase {

// C_m(t) = <E_m(t)|psi(t)>, alpha(t) = continuously tracked arg C_k(t), and
// eps_m(t) = C_m(t) - delta_mk e^{i alpha(t)}. With this choice of alpha the
// level-k residual eps_k is purely radial.
struct ExpansionTrajectory {
    TimeGrid grid;
    int k = 0;
    Eigen::MatrixXcd coefficients;  // (level, grid point)
    Eigen::VectorXd alpha;          // unwrapped, alpha(0) = 0
    Eigen::MatrixXcd epsilons;      // same layout as coefficients

    int dim() const { return static_cast<int>(coefficients.rows()); }
    int points() const { return static_cast<int>(coefficients.cols()); }
};

// Expand traj over frames (which must share its grid). The trajectory must
// start in the frame's level-k vector; |C_k| dropping below 0.5 anywhere
// raises AdiabaticityLost.
ExpansionTrajectory expand_state(const Trajectory& traj,
                                 const EigenframeTrajectory& frames, int k);

// The five terms whose sum is the exact difference between the geometric
// phase of the trajectory and the adiabatic-approximation phase of level k.
struct DeltaGammaBreakdown {
    double term_arg = 0.0;            // endpoint mixing of the eigenframe overlaps
    double term_boundary = 0.0;       // i(eps_k e^{-i alpha} + sum int eps* d eps), real
    double term_re_alpha = 0.0;       // -2 Re int eps_k alphadot e^{-i alpha}
    double term_im_connection = 0.0;  // -2 Im int sum eps_m <E_k|Edot_m> e^{-i alpha}
    double term_im_quadratic = 0.0;   // -Im int sum eps_m* eps_n <E_m|Edot_n>
    double total = 0.0;

    // |Im| of the boundary expression before its real part is taken; a
    // normalization-identity consistency measure, not a tolerance knob.
    double boundary_imag_residual = 0.0;
};

DeltaGammaBreakdown delta_gamma_general(const ExpansionTrajectory& exp,
                                        const EigenframeTrajectory& frames);

struct ReconstructionReport {
    double gamma_exact_unwrapped = 0.0;
    double gamma_adiabatic_unwrapped = 0.0;
    DeltaGammaBreakdown delta;
    double residual = 0.0;   // |gamma_exact - (gamma_adiabatic + delta.total)| mod 2 pi
    double tolerance = 0.0;  // 1e-6 with analytic frame derivatives, 1e-5 otherwise
    bool pass = false;
};

// Check gamma_exact = gamma_adiabatic + delta_gamma on a trajectory. The
// exact phase uses the Schrodinger identity when `model` is given and
// finite differences otherwise.
ReconstructionReport verify_reconstruction(const Trajectory& traj,
                                           const EigenframeTrajectory& frames, int k,
                                           const HamiltonianModel* model = nullptr);

}  // namespace geomphase
