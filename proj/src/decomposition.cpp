#include "geomphase/decomposition.hpp"

#include <cmath>

namespace geomphase {

namespace {

void require_shared_grid(const TimeGrid& a, const TimeGrid& b, const char* who) {
    if (a.points() != b.points() || a.t0() != b.t0() || a.t1() != b.t1()) {
        throw InvalidArgument(std::string(who) + ": trajectory and frames must share one grid");
    }
}

}  // namespace

ExpansionTrajectory expand_state(const Trajectory& traj,
                                 const EigenframeTrajectory& frames, int k) {
    require_shared_grid(traj.grid, frames.grid, "expand_state");
    const int n = traj.points();
    const int dim = traj.dim();
    if (frames.dim() != dim) throw DimensionMismatch("expand_state: dimension mismatch");
    if (k < 0 || k >= dim) throw InvalidArgument("expand_state: level index out of range");

    if ((traj.states.col(0) - frames.at(0).vectors.col(k)).norm() > 1e-8) {
        throw InvalidArgument("expand_state: trajectory does not start in the level-k "
                              "frame vector");
    }

    ExpansionTrajectory exp{traj.grid, k, {}, {}, {}};
    exp.coefficients.resize(dim, n);
    for (int j = 0; j < n; ++j) {
        exp.coefficients.col(j).noalias() =
            frames.at(j).vectors.adjoint() * traj.states.col(j);
    }

    std::vector<cplx> ck(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const cplx c = exp.coefficients(k, j);
        if (std::abs(c) < 0.5) {
            throw AdiabaticityLost("expand_state: |C_k| = " + std::to_string(std::abs(c)) +
                                   " at t = " + std::to_string(traj.grid[j]) +
                                   "; the eigenstate expansion around level " +
                                   std::to_string(k) + " lost its meaning");
        }
        ck[static_cast<size_t>(j)] = c;
        const double sum = exp.coefficients.col(j).squaredNorm();
        if (std::abs(sum - 1.0) > 1e-8) {
            throw Error("expand_state: sum_m |C_m|^2 deviates from 1 by more than 1e-8 "
                        "(non-orthonormal frames or corrupted trajectory)");
        }
    }

    const std::vector<double> alpha = unwrap_path(ck);
    exp.alpha.resize(n);
    for (int j = 0; j < n; ++j) exp.alpha[j] = alpha[static_cast<size_t>(j)];

    exp.epsilons = exp.coefficients;
    for (int j = 0; j < n; ++j) {
        exp.epsilons(k, j) -= std::polar(1.0, exp.alpha[j]);
    }
    return exp;
}

DeltaGammaBreakdown delta_gamma_general(const ExpansionTrajectory& exp,
                                        const EigenframeTrajectory& frames) {
    require_shared_grid(exp.grid, frames.grid, "delta_gamma_general");
    const int n = exp.points();
    const int dim = exp.dim();
    const int k = exp.k;
    const double h = exp.grid.spacing();

    const cplx z00 = frames.at(0).vectors.col(k).dot(frames.at(n - 1).vectors.col(k));
    if (std::abs(z00) < kOverlapThreshold) {
        throw OrthogonalEndpointsError("delta_gamma_general: <E_k(0)|E_k(tau)> is "
                                       "(numerically) zero");
    }

    std::vector<Eigen::MatrixXcd> conns = frame_connections(frames, 4);

    // e^{-i alpha} and alphadot on the grid
    std::vector<cplx> phase(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) phase[static_cast<size_t>(j)] = std::polar(1.0, -exp.alpha[j]);
    std::vector<double> alpha_series(exp.alpha.data(), exp.alpha.data() + n);
    const std::vector<double> alpha_dot = differentiate(std::span<const double>(alpha_series), h, 4);

    DeltaGammaBreakdown out;

    // endpoint mixing term
    cplx mix(1.0, 0.0);
    for (int m = 0; m < dim; ++m) {
        const cplx zm = frames.at(0).vectors.col(k).dot(frames.at(n - 1).vectors.col(m));
        mix += exp.epsilons(m, n - 1) * (zm / z00) * phase[static_cast<size_t>(n - 1)];
    }
    out.term_arg = std::arg(mix);

    // boundary term: i (eps_k(tau) e^{-i alpha(tau)} + sum_m int eps_m* epsdot_m dt)
    cplx path_sum(0.0, 0.0);
    {
        std::vector<cplx> row(static_cast<size_t>(n));
        std::vector<double> re(static_cast<size_t>(n)), im(static_cast<size_t>(n));
        for (int m = 0; m < dim; ++m) {
            for (int j = 0; j < n; ++j) row[static_cast<size_t>(j)] = exp.epsilons(m, j);
            const std::vector<cplx> drow = differentiate(std::span<const cplx>(row), h, 4);
            for (int j = 0; j < n; ++j) {
                const cplx v = std::conj(row[static_cast<size_t>(j)]) * drow[static_cast<size_t>(j)];
                re[static_cast<size_t>(j)] = v.real();
                im[static_cast<size_t>(j)] = v.imag();
            }
            path_sum += cplx(simpson(re, h), simpson(im, h));
        }
    }
    const cplx boundary_pre = cplx(0.0, 1.0) *
        (exp.epsilons(k, n - 1) * phase[static_cast<size_t>(n - 1)] + path_sum);
    out.term_boundary = boundary_pre.real();
    out.boundary_imag_residual = std::abs(boundary_pre.imag());

    // -2 Re int eps_k alphadot e^{-i alpha}
    {
        std::vector<double> g(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            g[static_cast<size_t>(j)] =
                (exp.epsilons(k, j) * phase[static_cast<size_t>(j)]).real() *
                alpha_dot[static_cast<size_t>(j)];
        }
        out.term_re_alpha = -2.0 * simpson(g, h);
    }

    // -2 Im int sum_m eps_m <E_k|Edot_m> e^{-i alpha}
    {
        std::vector<double> g(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            cplx acc(0.0, 0.0);
            const auto& d = conns[static_cast<size_t>(j)];
            for (int m = 0; m < dim; ++m) acc += exp.epsilons(m, j) * d(k, m);
            g[static_cast<size_t>(j)] = (acc * phase[static_cast<size_t>(j)]).imag();
        }
        out.term_im_connection = -2.0 * simpson(g, h);
    }

    // -Im int sum_{mn} eps_m* eps_n <E_m|Edot_n>
    {
        std::vector<double> g(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            const auto eps = exp.epsilons.col(j);
            g[static_cast<size_t>(j)] = (eps.dot(conns[static_cast<size_t>(j)] * eps)).imag();
        }
        out.term_im_quadratic = -simpson(g, h);
    }

    out.total = out.term_arg + out.term_boundary + out.term_re_alpha +
                out.term_im_connection + out.term_im_quadratic;
    return out;
}

ReconstructionReport verify_reconstruction(const Trajectory& traj,
                                           const EigenframeTrajectory& frames, int k,
                                           const HamiltonianModel* model) {
    const ExpansionTrajectory exp = expand_state(traj, frames, k);

    ReconstructionReport report;
    report.delta = delta_gamma_general(exp, frames);
    report.gamma_adiabatic_unwrapped = geometric_phase_adiabatic(frames, k).unwrapped;
    report.gamma_exact_unwrapped =
        model ? geometric_phase_exact(traj, *model).unwrapped
              : geometric_phase_exact_fd(traj).unwrapped;
    report.residual = std::abs(wrap_angle(report.gamma_exact_unwrapped -
                                          report.gamma_adiabatic_unwrapped -
                                          report.delta.total));
    report.tolerance = frames.has_analytic_connection() ? 1e-6 : 1e-5;
    report.pass = report.residual <= report.tolerance;
    return report;
}

}  // namespace geomphase
