#include "geomphase/phase.hpp"

#include <cmath>

namespace geomphase {

namespace {

// <psi(0)|psi(t_j)> for every grid point.
std::vector<cplx> overlap_series(const Eigen::MatrixXcd& states) {
    std::vector<cplx> z(static_cast<size_t>(states.cols()));
    for (Eigen::Index j = 0; j < states.cols(); ++j) {
        z[static_cast<size_t>(j)] = states.col(0).dot(states.col(j));
    }
    return z;
}

void require_endpoint_overlap(double magnitude, const char* who) {
    if (magnitude < kOverlapThreshold) {
        throw OrthogonalEndpointsError(std::string(who) +
                                       ": endpoint overlap magnitude " +
                                       std::to_string(magnitude) +
                                       " below 1e-6; phase undefined");
    }
}

// Re <psi_j|H(t_j)|psi_j> on the grid (= i<psi|psidot> for Schrodinger
// trajectories).
std::vector<double> schrodinger_connection(const Trajectory& traj,
                                           const HamiltonianModel& model) {
    std::vector<double> g(static_cast<size_t>(traj.points()));
    Eigen::MatrixXcd H(traj.dim(), traj.dim());
    Eigen::VectorXcd hpsi(traj.dim());
    for (int j = 0; j < traj.points(); ++j) {
        model.evaluate_into(traj.grid[j], H);
        hpsi.noalias() = H * traj.states.col(j);
        g[static_cast<size_t>(j)] = traj.states.col(j).dot(hpsi).real();
    }
    return g;
}

// Re i<psi_j|psidot_j> with psidot from 4th-order finite differences.
std::vector<double> finite_difference_connection(const Trajectory& traj) {
    const int n = traj.points();
    const int dim = traj.dim();
    const double h = traj.grid.spacing();
    std::vector<double> g(static_cast<size_t>(n));
    std::vector<cplx> series(static_cast<size_t>(n));
    std::vector<double> acc(static_cast<size_t>(n), 0.0);
    // differentiate componentwise to keep memory flat for long trajectories
    for (int c = 0; c < dim; ++c) {
        for (int j = 0; j < n; ++j) series[static_cast<size_t>(j)] = traj.states(c, j);
        const std::vector<cplx> ds = differentiate(std::span<const cplx>(series), h, 4);
        for (int j = 0; j < n; ++j) {
            acc[static_cast<size_t>(j)] +=
                std::imag(std::conj(traj.states(c, j)) * ds[static_cast<size_t>(j)]);
        }
    }
    for (int j = 0; j < n; ++j) g[static_cast<size_t>(j)] = -acc[static_cast<size_t>(j)];
    return g;
}

}  // namespace

PhaseValue geometric_phase_exact(const Trajectory& traj, const HamiltonianModel& model,
                                 ConnectionScheme scheme) {
    if (scheme == ConnectionScheme::FiniteDifference) return geometric_phase_exact_fd(traj);
    const std::vector<cplx> z = overlap_series(traj.states);
    require_endpoint_overlap(std::abs(z.back()), "geometric_phase_exact");
    const std::vector<double> arg = unwrap_path(z);
    const std::vector<double> g = schrodinger_connection(traj, model);
    return PhaseValue::from_unwrapped(arg.back() + simpson(g, traj.grid.spacing()));
}

PhaseValue geometric_phase_exact_fd(const Trajectory& traj) {
    const std::vector<cplx> z = overlap_series(traj.states);
    require_endpoint_overlap(std::abs(z.back()), "geometric_phase_exact");
    const std::vector<double> arg = unwrap_path(z);
    const std::vector<double> g = finite_difference_connection(traj);
    return PhaseValue::from_unwrapped(arg.back() + simpson(g, traj.grid.spacing()));
}

namespace {

std::vector<cplx> frame_overlap_series(const EigenframeTrajectory& frames, int k) {
    const size_t n = frames.frames.size();
    std::vector<cplx> z(n);
    const auto& v0 = frames.at(0).vectors;
    for (size_t j = 0; j < n; ++j) {
        z[j] = v0.col(k).dot(frames.at(static_cast<int>(j)).vectors.col(k));
    }
    return z;
}

// Re i<E_k|Edot_k> per grid point.
std::vector<double> adiabatic_connection(const EigenframeTrajectory& frames, int k) {
    const auto conns = frame_connections(frames, 4);
    std::vector<double> g(conns.size());
    for (size_t j = 0; j < conns.size(); ++j) g[j] = -std::imag(conns[j](k, k));
    return g;
}

void require_level(const EigenframeTrajectory& frames, int k, const char* who) {
    if (frames.frames.empty() || k < 0 || k >= frames.dim()) {
        throw InvalidArgument(std::string(who) + ": level index out of range");
    }
}

}  // namespace

PhaseValue geometric_phase_adiabatic(const EigenframeTrajectory& frames, int k) {
    require_level(frames, k, "geometric_phase_adiabatic");
    const std::vector<cplx> z = frame_overlap_series(frames, k);
    require_endpoint_overlap(std::abs(z.back()), "geometric_phase_adiabatic");
    const std::vector<double> arg = unwrap_path(z);
    const std::vector<double> g = adiabatic_connection(frames, k);
    return PhaseValue::from_unwrapped(arg.back() + simpson(g, frames.grid.spacing()));
}

ConnectionIntegral berry_connection_integral(const EigenframeTrajectory& frames, int k) {
    require_level(frames, k, "berry_connection_integral");
    const std::vector<double> g = adiabatic_connection(frames, k);
    ConnectionIntegral out;
    out.integral = simpson(g, frames.grid.spacing());
    const cplx z = frames.at(0).vectors.col(k).dot(
        frames.at(frames.grid.points() - 1).vectors.col(k));
    out.endpoint_arg = std::arg(z);
    out.valid_alone = std::abs(z) >= kOverlapThreshold && std::abs(out.endpoint_arg) <= 1e-8;
    return out;
}

PhaseValue closed_form_adiabatic_phase(const RotatingFieldParams& p, double tau) {
    p.validate();
    const double ct = std::cos(p.theta);
    const double w = p.omega;
    auto z = [w, ct](double x) {
        return cplx(std::cos(0.5 * w * x), ct * std::sin(0.5 * w * x));
    };
    const double arg_term = unwrap_arg_of(z, tau, 0.5 * w);
    return PhaseValue::from_unwrapped(arg_term - 0.5 * w * tau * ct);
}

PhaseValue closed_form_exact_phase(const RotatingFieldParams& p, double tau) {
    p.validate();
    const double wb = p.omega_bar();
    const double w = p.omega, w0 = p.omega0;
    const double ct = std::cos(p.theta);
    const double s2 = std::sin(p.theta) * std::sin(p.theta);
    auto z = [wb, w, w0, ct](double x) {
        const double cb = std::cos(0.5 * wb * x), sb = std::sin(0.5 * wb * x);
        const double cw = std::cos(0.5 * w * x), sw = std::sin(0.5 * w * x);
        const double re = cb * cw + ((w + w0 * ct) / wb) * sb * sw;
        const double im = ct * cb * sw - ((w0 + w * ct) / wb) * sb * cw;
        return cplx(re, im);
    };
    const double arg_term = unwrap_arg_of(z, tau, 0.5 * (wb + w));
    const double u = arg_term + (w0 * w * w * s2 / (2.0 * wb * wb * wb)) * std::sin(wb * tau) +
                     0.5 * w0 * tau - (w0 * w * w * s2 / (2.0 * wb * wb)) * tau;
    return PhaseValue::from_unwrapped(u);
}

double delta_gamma_spin_estimate(const RotatingFieldParams& p, double tau) {
    p.validate();
    const double s = p.omega * p.omega * std::sin(p.theta) * std::sin(p.theta) /
                     (2.0 * (p.omega0 + 2.0 * p.omega * std::cos(p.theta)));
    return -tau * s;
}

PhaseReport make_phase_report(const Trajectory& traj, const HamiltonianModel& model,
                              const EigenframeTrajectory& frames, int k) {
    const std::vector<cplx> z = overlap_series(traj.states);
    require_endpoint_overlap(std::abs(z.back()), "make_phase_report");

    PhaseReport report;
    report.overlap_magnitude = std::abs(z.back());
    const std::vector<double> arg = unwrap_path(z);
    report.total = PhaseValue::from_unwrapped(arg.back());
    const std::vector<double> g = schrodinger_connection(traj, model);
    const double energy_integral = simpson(g, traj.grid.spacing());
    report.dynamical = -energy_integral;
    report.geometric_exact = PhaseValue::from_unwrapped(arg.back() + energy_integral);
    report.geometric_adiabatic = geometric_phase_adiabatic(frames, k);
    return report;
}

namespace {

void require_stride(int stride, int points, const char* who) {
    if (stride <= 0 || stride % 2 != 0 || stride >= points) {
        throw InvalidArgument(std::string(who) + ": stride must be even, positive and "
                                                 "smaller than the grid");
    }
}

}  // namespace

PhasePrefixes exact_phase_prefixes(const Trajectory& traj, const HamiltonianModel& model,
                                   int stride) {
    require_stride(stride, traj.points(), "exact_phase_prefixes");
    const std::vector<cplx> z = overlap_series(traj.states);
    const std::vector<double> arg = unwrap_path(z);
    const std::vector<double> g = schrodinger_connection(traj, model);
    const std::vector<double> integral = simpson_prefix(g, traj.grid.spacing());

    PhasePrefixes out;
    for (int j = stride; j < traj.points(); j += stride) {
        const size_t sj = static_cast<size_t>(j);
        require_endpoint_overlap(std::abs(z[sj]), "exact_phase_prefixes");
        out.tau.push_back(traj.grid[j]);
        out.unwrapped.push_back(arg[sj] + integral[sj]);
        out.overlap_magnitude.push_back(std::abs(z[sj]));
    }
    return out;
}

PhasePrefixes adiabatic_phase_prefixes(const EigenframeTrajectory& frames, int k,
                                       int stride) {
    require_level(frames, k, "adiabatic_phase_prefixes");
    require_stride(stride, frames.grid.points(), "adiabatic_phase_prefixes");
    const std::vector<cplx> z = frame_overlap_series(frames, k);
    const std::vector<double> arg = unwrap_path(z);
    const std::vector<double> g = adiabatic_connection(frames, k);
    const std::vector<double> integral = simpson_prefix(g, frames.grid.spacing());

    PhasePrefixes out;
    for (int j = stride; j < frames.grid.points(); j += stride) {
        const size_t sj = static_cast<size_t>(j);
        require_endpoint_overlap(std::abs(z[sj]), "adiabatic_phase_prefixes");
        out.tau.push_back(frames.grid[j]);
        out.unwrapped.push_back(arg[sj] + integral[sj]);
        out.overlap_magnitude.push_back(std::abs(z[sj]));
    }
    return out;
}

}  // namespace geomphase
