// helpers.hpp — shared test utilities: independent oracle formulas for the
// rotating-field model, seeded random generators, and gauge appliers. The
// oracle code here deliberately re-derives everything from the model
// definition instead of calling the library paths it checks.
#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "geomphase/decomposition.hpp"
#include "geomphase/run.hpp"

namespace oracle {

using geomphase::cplx;

inline double wbar(double w0, double w, double th) {
    return std::sqrt(w0 * w0 + w * w + 2.0 * w0 * w * std::cos(th));
}

// eigenvectors of -(w0/2)(sigma . n(t)) in the fixed test gauge
inline Eigen::Vector2cd e1(double w, double th, double t) {
    Eigen::Vector2cd v;
    v << std::polar(1.0, -0.5 * w * t) * std::sin(0.5 * th),
        -std::polar(1.0, 0.5 * w * t) * std::cos(0.5 * th);
    return v;
}

inline Eigen::Vector2cd e2(double w, double th, double t) {
    Eigen::Vector2cd v;
    v << std::polar(1.0, -0.5 * w * t) * std::cos(0.5 * th),
        std::polar(1.0, 0.5 * w * t) * std::sin(0.5 * th);
    return v;
}

inline std::pair<cplx, cplx> ab(double w0, double w, double th, double t) {
    const double wb = wbar(w0, w, th);
    const double x = 0.5 * wb * t;
    const cplx a = cplx(std::cos(x), -(w0 + w * std::cos(th)) / wb * std::sin(x));
    const cplx b = cplx(0.0, w * std::sin(th) / wb * std::sin(x));
    return {a, b};
}

inline Eigen::Vector2cd spin_state(double w0, double w, double th, double t) {
    const auto [a, b] = ab(w0, w, th, t);
    return a * e1(w, th, t) + b * e2(w, th, t);
}

inline Eigen::Matrix2cd spin_hamiltonian(double w0, double w, double th, double t) {
    Eigen::Matrix2cd h;
    h(0, 0) = -0.5 * w0 * std::cos(th);
    h(1, 1) = 0.5 * w0 * std::cos(th);
    h(0, 1) = -0.5 * w0 * std::sin(th) * std::polar(1.0, -w * t);
    h(1, 0) = std::conj(h(0, 1));
    return h;
}

// Frobenius norm of the projector difference between the exact state and e1,
// assembled from the explicit coefficient form (diagonal part beta on
// |E1><E1| - |E2><E2|, off-diagonal c on |E1><E2| and its conjugate).
inline double projector_gap_coefficients(double w0, double w, double th, double t) {
    const double wb = wbar(w0, w, th);
    const double sh = std::sin(0.5 * wb * t), ch = std::cos(0.5 * wb * t);
    const double r = w * std::sin(th) / wb;
    const double beta = r * r * sh * sh;
    const cplx c(-((w0 + w * std::cos(th)) * w * std::sin(th) / (wb * wb)) * sh * sh,
                 -r * ch * sh);
    return std::sqrt(2.0 * beta * beta + 2.0 * std::norm(c));
}

}  // namespace oracle

namespace testutil {

using geomphase::cplx;

inline Eigen::MatrixXcd random_hermitian(int dim, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
    }
    Eigen::MatrixXcd h = 0.5 * (m + m.adjoint().eval());
    h *= scale / h.norm();
    return h;
}

inline Eigen::VectorXcd random_unit_vector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = cplx(gauss(rng), gauss(rng));
    return v / v.norm();
}

// H(t) = A + B sin(nu t) with Gaussian Hermitian A, B, |B| = 0.1 |A| and nu
// a hundredth of A's smallest eigenvalue gap.
struct ModulatedModel {
    geomphase::HamiltonianModel model;
    double nu = 0.0;
    double period = 0.0;
    double min_gap = 0.0;
};

inline ModulatedModel make_modulated_model(int dim, unsigned long long seed,
                                           double coupling_scale = 0.1) {
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXcd a = random_hermitian(dim, rng, 2.0);
    const Eigen::MatrixXcd b = random_hermitian(dim, rng, coupling_scale * a.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    double min_gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m + 1 < dim; ++m) {
        min_gap = std::min(min_gap, solver.eigenvalues()[m + 1] - solver.eigenvalues()[m]);
    }
    const double nu = min_gap / 100.0;
    ModulatedModel out{
        geomphase::HamiltonianModel::analytic(
            dim, [a, b, nu](double t) { return a + b * std::sin(nu * t); }),
        nu, 2.0 * M_PI / nu, min_gap};
    return out;
}

// degree-<=3 polynomial gauge phase
struct GaugePoly {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    double operator()(double t) const { return c0 + t * (c1 + t * (c2 + t * c3)); }
    double rate_bound(double t_max) const {
        return std::abs(c1) + 2.0 * std::abs(c2) * t_max + 3.0 * std::abs(c3) * t_max * t_max;
    }
};

inline GaugePoly random_gauge(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return GaugePoly{u(rng), u(rng), u(rng), u(rng)};
}

inline geomphase::Trajectory apply_state_gauge(const geomphase::Trajectory& traj,
                                               const GaugePoly& chi) {
    geomphase::Trajectory out = traj;
    for (int j = 0; j < out.points(); ++j) {
        out.states.col(j) *= std::polar(1.0, chi(out.grid[j]));
    }
    return out;
}

// one independent polynomial per level
inline geomphase::EigenframeTrajectory apply_frame_gauge(
    const geomphase::EigenframeTrajectory& frames, const std::vector<GaugePoly>& betas) {
    geomphase::EigenframeTrajectory out = frames;
    out.analytic_connection = nullptr;  // the re-gauged frame has no closed form
    for (auto& frame : out.frames) {
        for (int m = 0; m < frame.dim(); ++m) {
            frame.vectors.col(m) *= std::polar(1.0, betas[static_cast<size_t>(m)](frame.time));
        }
    }
    return out;
}

inline double wrap_diff(double a, double b) { return geomphase::wrap_angle(a - b); }

}  // namespace testutil
