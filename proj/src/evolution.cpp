#include "geomphase/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace geomphase {

namespace {

// Dormand-Prince 5(4) tableau (FSAL: stage 7 equals the next step's stage 1).
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                            c5 = 8.0 / 9.0;
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    // 5th-order weights (also the a7 row, FSAL)
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    // b - bhat, the embedded error weights
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    // dense-output weights
    static constexpr double d1 = -12715105075.0 / 11282082432.0;
    static constexpr double d3 = 87487479700.0 / 32700410799.0;
    static constexpr double d4 = -10690763975.0 / 1880347072.0;
    static constexpr double d5 = 701980252875.0 / 199316789632.0;
    static constexpr double d6 = -1453857185.0 / 822651844.0;
    static constexpr double d7 = 69997945.0 / 29380423.0;
};

constexpr long kMaxSteps = 400000000L;

}  // namespace

Trajectory evolve(const HamiltonianModel& model, const StateVector& psi0,
                  const TimeGrid& grid, double tol) {
    if (psi0.dim() != model.dim()) {
        throw DimensionMismatch("evolve: psi0 does not match the model dimension");
    }
    if (!(tol >= 1e-12 && tol <= 1e-6)) {
        throw InvalidArgument("evolve: tol must lie in [1e-12, 1e-6]");
    }
    if (!model.contains_time(grid.t0()) || !model.contains_time(grid.t1())) {
        throw DomainError("evolve: grid exceeds the model's time domain");
    }

    const int n = model.dim();
    Trajectory traj{grid, Eigen::MatrixXcd(n, grid.points()), 0.0, 0, 0};

    Eigen::MatrixXcd H(n, n);
    auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
        model.evaluate_into(t, H);
        dy.noalias() = H * y;
        dy *= cplx(0.0, -1.0);
    };

    Eigen::VectorXcd y = psi0.amplitudes();
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    Eigen::VectorXcd ytmp(n), ynew(n), yerr(n);
    Eigen::VectorXcd rc2(n), rc3(n), rc4(n), rc5(n);  // dense-output data

    const double t_end = grid.t1();
    double t = grid.t0();
    traj.states.col(0) = y;
    int next_out = 1;

    rhs(t, y, k1);

    // initial step: resolve the local derivative scale, refined by the controller
    double h = 0.01 * (y.norm() + 1e-16) / (k1.norm() + 1e-16);
    h = std::min(h, grid.span());

    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    double facold = 1e-4;
    const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safety = 0.9;

    for (long step = 0; step < kMaxSteps; ++step) {
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }
        if (!(h > std::abs(t) * 1e-14 + 1e-300)) {
            throw StiffnessError("evolve: step size underflow at t = " + std::to_string(t));
        }

        ytmp = y + h * Dopri5::a21 * k1;
        rhs(t + Dopri5::c2 * h, ytmp, k2);
        ytmp = y + h * (Dopri5::a31 * k1 + Dopri5::a32 * k2);
        rhs(t + Dopri5::c3 * h, ytmp, k3);
        ytmp = y + h * (Dopri5::a41 * k1 + Dopri5::a42 * k2 + Dopri5::a43 * k3);
        rhs(t + Dopri5::c4 * h, ytmp, k4);
        ytmp = y + h * (Dopri5::a51 * k1 + Dopri5::a52 * k2 + Dopri5::a53 * k3 +
                        Dopri5::a54 * k4);
        rhs(t + Dopri5::c5 * h, ytmp, k5);
        ytmp = y + h * (Dopri5::a61 * k1 + Dopri5::a62 * k2 + Dopri5::a63 * k3 +
                        Dopri5::a64 * k4 + Dopri5::a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (Dopri5::b1 * k1 + Dopri5::b3 * k3 + Dopri5::b4 * k4 +
                        Dopri5::b5 * k5 + Dopri5::b6 * k6);
        rhs(t + h, ynew, k7);

        yerr = h * (Dopri5::e1 * k1 + Dopri5::e3 * k3 + Dopri5::e4 * k4 +
                    Dopri5::e5 * k5 + Dopri5::e6 * k6 + Dopri5::e7 * k7);
        // local error per unit time (states are O(1), absolute scale)
        const double err = yerr.norm() * inv_sqrt_n / (tol * h);

        const double fac11 = std::pow(std::max(err, 1e-30), expo1);
        if (err <= 1.0) {
            ++traj.accepted_steps;

            // dense output for grid times inside (t, t + h]
            const double t_cover = last ? t_end : t + h;
            if (next_out < grid.points() && grid[next_out] <= t_cover) {
                rc2 = ynew - y;
                rc3 = h * k1 - rc2;
                rc4 = rc2 - h * k7 - rc3;
                rc5 = h * (Dopri5::d1 * k1 + Dopri5::d3 * k3 + Dopri5::d4 * k4 +
                           Dopri5::d5 * k5 + Dopri5::d6 * k6 + Dopri5::d7 * k7);
                while (next_out < grid.points() && grid[next_out] <= t_cover) {
                    const double theta = (grid[next_out] - t) / h;
                    const double th1 = 1.0 - theta;
                    traj.states.col(next_out) =
                        y + theta * (rc2 + th1 * (rc3 + theta * (rc4 + th1 * rc5)));
                    ++next_out;
                }
            }

            t += h;
            y.swap(ynew);
            k1.swap(k7);  // FSAL

            if (last) {
                traj.states.col(grid.points() - 1) = y;  // exact endpoint, not interpolant
                break;
            }

            double fac = fac11 / std::pow(facold, beta);
            fac = std::clamp(fac / safety, 0.2, 10.0);
            h /= fac;
            facold = std::max(err, 1e-4);
        } else {
            ++traj.rejected_steps;
            h /= std::min(fac11 / safety, 10.0);
        }
        if (step + 1 == kMaxSteps) {
            throw StiffnessError("evolve: step budget exhausted");
        }
    }

    double drift = 0.0;
    for (int j = 0; j < grid.points(); ++j) {
        drift = std::max(drift, std::abs(traj.states.col(j).norm() - 1.0));
    }
    traj.norm_drift = drift;
    if (drift > kNormDriftLimit) {
        throw IntegrationAccuracyError("evolve: norm drift " + std::to_string(drift) +
                                       " exceeds " + std::to_string(kNormDriftLimit));
    }
    return traj;
}

std::pair<cplx, cplx> closed_form_spin_amplitudes(const RotatingFieldParams& p, double t) {
    const double wb = p.omega_bar();
    const double half = 0.5 * wb * t;
    const cplx a = cplx(std::cos(half), 0.0) -
                   cplx(0.0, (p.omega0 + p.omega * std::cos(p.theta)) / wb) * std::sin(half);
    const cplx b = cplx(0.0, p.omega * std::sin(p.theta) / wb) * std::sin(half);
    return {a, b};
}

StateVector closed_form_spin_state(const RotatingFieldParams& p, double t) {
    p.validate();
    const Eigenframe frame = rotating_field_eigenframe(p, t);
    const auto [a, b] = closed_form_spin_amplitudes(p, t);
    Eigen::VectorXcd v = a * frame.vectors.col(0) + b * frame.vectors.col(1);
    return StateVector(std::move(v));
}

}  // namespace geomphase
