#include "geomphase/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace geomphase {

namespace {

// Symmetrize in place without allocating; returns the largest asymmetry seen.
double symmetrize(Eigen::MatrixXcd& H) {
    double asym = 0.0;
    const Eigen::Index n = H.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        asym = std::max(asym, std::abs(H(i, i).imag()));
        H(i, i) = cplx(H(i, i).real(), 0.0);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const cplx a = H(i, j);
            const cplx b = std::conj(H(j, i));
            asym = std::max(asym, std::abs(a - b));
            const cplx avg = 0.5 * (a + b);
            H(i, j) = avg;
            H(j, i) = std::conj(avg);
        }
    }
    return asym;
}

}  // namespace

// ----------------------------- rotating field -------------------------------

double RotatingFieldParams::omega_bar() const {
    return std::sqrt(omega0 * omega0 + omega * omega + 2.0 * omega0 * omega * std::cos(theta));
}

void RotatingFieldParams::validate() const {
    if (!std::isfinite(omega0) || !std::isfinite(omega) || !std::isfinite(theta)) {
        throw InvalidArgument("RotatingFieldParams: non-finite parameter");
    }
    if (!(omega0 > 0.0)) throw InvalidArgument("RotatingFieldParams: omega0 must be > 0");
    if (omega < 0.0) throw InvalidArgument("RotatingFieldParams: omega must be >= 0");
    if (theta < 0.0 || theta > M_PI) {
        throw InvalidArgument("RotatingFieldParams: theta must lie in [0, pi]");
    }
}

Eigenframe rotating_field_eigenframe(const RotatingFieldParams& p, double t) {
    p.validate();
    const double half = 0.5 * p.theta;
    const cplx em = std::polar(1.0, -0.5 * p.omega * t);
    const cplx ep = std::conj(em);

    Eigenframe frame;
    frame.time = t;
    frame.energies.resize(2);
    frame.energies << 0.5 * p.omega0, -0.5 * p.omega0;
    frame.vectors.resize(2, 2);
    frame.vectors(0, 0) = em * std::sin(half);
    frame.vectors(1, 0) = -ep * std::cos(half);
    frame.vectors(0, 1) = em * std::cos(half);
    frame.vectors(1, 1) = ep * std::sin(half);
    return frame;
}

Eigen::MatrixXcd rotating_field_connection(const RotatingFieldParams& p) {
    const cplx i_half_omega(0.0, 0.5 * p.omega);
    Eigen::MatrixXcd d(2, 2);
    d(0, 0) = i_half_omega * std::cos(p.theta);
    d(0, 1) = -i_half_omega * std::sin(p.theta);
    d(1, 0) = -i_half_omega * std::sin(p.theta);
    d(1, 1) = -i_half_omega * std::cos(p.theta);
    return d;
}

// ----------------------------- sampled series -------------------------------

SampledHamiltonian::SampledHamiltonian(std::vector<double> times,
                                       std::vector<Eigen::MatrixXcd> matrices) {
    if (times.size() < 2) throw InvalidArgument("SampledHamiltonian: need >= 2 samples");
    if (times.size() != matrices.size()) {
        throw InvalidArgument("SampledHamiltonian: times/matrices length mismatch");
    }
    for (size_t s = 0; s + 1 < times.size(); ++s) {
        if (!(times[s] < times[s + 1])) {
            throw InvalidArgument("SampledHamiltonian: times must be strictly increasing");
        }
    }
    dim_ = static_cast<int>(matrices.front().rows());
    for (size_t s = 0; s < matrices.size(); ++s) {
        Eigen::MatrixXcd& m = matrices[s];
        if (m.rows() != dim_ || m.cols() != dim_ || dim_ < 2) {
            throw InvalidArgument("SampledHamiltonian: samples must share one square dim >= 2");
        }
        if (!m.allFinite()) {
            throw ModelFormatError("SampledHamiltonian: non-finite entries in sample " +
                                   std::to_string(s));
        }
        const double asym = symmetrize(m);
        if (asym > kHermitianAsymTol) {
            throw ModelFormatError("SampledHamiltonian: sample " + std::to_string(s) +
                                   " is not Hermitian (asymmetry " + std::to_string(asym) + ")");
        }
    }
    times_ = std::move(times);
    values_ = std::move(matrices);

    // Natural cubic spline second derivatives, matrix-valued Thomas sweep.
    const size_t s = times_.size();
    curvature_.assign(s, Eigen::MatrixXcd::Zero(dim_, dim_));
    if (s > 2) {
        std::vector<double> diag(s, 0.0), upper(s, 0.0);
        std::vector<Eigen::MatrixXcd> rhs(s, Eigen::MatrixXcd::Zero(dim_, dim_));
        for (size_t j = 1; j + 1 < s; ++j) {
            const double hl = times_[j] - times_[j - 1];
            const double hr = times_[j + 1] - times_[j];
            diag[j] = 2.0 * (hl + hr);
            upper[j] = hr;
            rhs[j] = 6.0 * ((values_[j + 1] - values_[j]) / hr - (values_[j] - values_[j - 1]) / hl);
        }
        for (size_t j = 2; j + 1 < s; ++j) {
            const double hl = times_[j] - times_[j - 1];
            const double w = hl / diag[j - 1];
            diag[j] -= w * upper[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        for (size_t j = s - 2; j >= 1; --j) {
            curvature_[j] = (rhs[j] - upper[j] * curvature_[j + 1]) / diag[j];
        }
    }
}

void SampledHamiltonian::evaluate_into(double t, Eigen::MatrixXcd& out) const {
    if (t < t_min() || t > t_max()) {
        throw DomainError("SampledHamiltonian: t = " + std::to_string(t) +
                          " outside [" + std::to_string(t_min()) + ", " +
                          std::to_string(t_max()) + "]");
    }
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    size_t j = static_cast<size_t>(it - times_.begin());
    if (j < times_.size() && times_[j] == t) {
        out = values_[j];  // stored samples reproduce exactly
        return;
    }
    j = (j == 0) ? 0 : j - 1;
    const double d = times_[j + 1] - times_[j];
    const double u = (times_[j + 1] - t) / d;
    const double w = (t - times_[j]) / d;
    out = u * values_[j] + w * values_[j + 1] +
          ((u * u * u - u) * curvature_[j] + (w * w * w - w) * curvature_[j + 1]) * (d * d / 6.0);
    symmetrize(out);
}

// ------------------------------- JSON ingest ---------------------------------

SampledHamiltonian parse_sampled_hamiltonian(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ModelFormatError(std::string("sampled model: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("times") || !j.contains("matrices")) {
        throw ModelFormatError("sampled model: expected object with dim/times/matrices");
    }
    const int dim = j["dim"].get<int>();
    if (dim < 2) throw ModelFormatError("sampled model: dim must be >= 2");
    std::vector<double> times = j["times"].get<std::vector<double>>();
    const auto& mats = j["matrices"];
    if (!mats.is_array() || mats.size() != times.size()) {
        throw ModelFormatError("sampled model: matrices must match times in length");
    }
    std::vector<Eigen::MatrixXcd> matrices;
    matrices.reserve(mats.size());
    for (size_t s = 0; s < mats.size(); ++s) {
        const auto& flat = mats[s];
        if (!flat.is_array() || flat.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim)) {
            throw ModelFormatError("sampled model: sample " + std::to_string(s) +
                                   " must hold dim*dim [re, im] pairs (row-major)");
        }
        Eigen::MatrixXcd m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                const auto& pair = flat[static_cast<size_t>(r * dim + c)];
                if (!pair.is_array() || pair.size() != 2) {
                    throw ModelFormatError("sampled model: sample " + std::to_string(s) +
                                           " entry (" + std::to_string(r) + "," +
                                           std::to_string(c) + ") must be [re, im]");
                }
                m(r, c) = cplx(pair[0].get<double>(), pair[1].get<double>());
            }
        }
        matrices.push_back(std::move(m));
    }
    return SampledHamiltonian(std::move(times), std::move(matrices));
}

SampledHamiltonian load_sampled_hamiltonian(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFormatError("sampled model: cannot open " + path);
    return parse_sampled_hamiltonian(in);
}

// ------------------------------- model union --------------------------------

HamiltonianModel HamiltonianModel::rotating_field(const RotatingFieldParams& p) {
    p.validate();
    HamiltonianModel m;
    m.body_ = p;
    m.dim_ = 2;
    return m;
}

HamiltonianModel HamiltonianModel::sampled(SampledHamiltonian series) {
    HamiltonianModel m;
    m.dim_ = series.dim();
    m.body_ = std::move(series);
    return m;
}

HamiltonianModel HamiltonianModel::analytic(int dim, Callback h_of_t) {
    if (dim < 2) throw InvalidArgument("HamiltonianModel::analytic: dim must be >= 2");
    if (!h_of_t) throw InvalidArgument("HamiltonianModel::analytic: empty callback");
    HamiltonianModel m;
    m.body_ = Analytic{dim, std::move(h_of_t)};
    m.dim_ = dim;
    return m;
}

void HamiltonianModel::evaluate_into(double t, Eigen::MatrixXcd& out) const {
    if (const auto* p = std::get_if<RotatingFieldParams>(&body_)) {
        out.resize(2, 2);
        const double hz = -0.5 * p->omega0 * std::cos(p->theta);
        const double hx = -0.5 * p->omega0 * std::sin(p->theta);
        const cplx phase = std::polar(1.0, -p->omega * t);
        out(0, 0) = hz;
        out(1, 1) = -hz;
        out(0, 1) = hx * phase;
        out(1, 0) = hx * std::conj(phase);
        return;
    }
    if (const auto* s = std::get_if<SampledHamiltonian>(&body_)) {
        s->evaluate_into(t, out);
        return;
    }
    const auto& a = std::get<Analytic>(body_);
    out = a.fn(t);
    if (out.rows() != dim_ || out.cols() != dim_) {
        throw InvalidArgument("HamiltonianModel: callback returned wrong dimension");
    }
    if (symmetrize(out) > kHermitianAsymTol) {
        throw InvalidArgument("HamiltonianModel: callback matrix is not Hermitian");
    }
}

HermitianOperator HamiltonianModel::evaluate(double t) const {
    Eigen::MatrixXcd h;
    evaluate_into(t, h);
    return HermitianOperator(h);
}

const RotatingFieldParams* HamiltonianModel::rotating_field() const {
    return std::get_if<RotatingFieldParams>(&body_);
}

double HamiltonianModel::grid_rate() const {
    if (const auto* p = std::get_if<RotatingFieldParams>(&body_)) {
        return p->omega_bar() + p->omega;
    }
    if (grid_rate_cache_ < 0.0) {
        Eigen::MatrixXcd h;
        evaluate_into(domain_start(), h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
        const auto& ev = solver.eigenvalues();
        grid_rate_cache_ = ev[ev.size() - 1] - ev[0];
    }
    return grid_rate_cache_;
}

double HamiltonianModel::domain_start() const {
    if (const auto* s = std::get_if<SampledHamiltonian>(&body_)) return s->t_min();
    return 0.0;
}

bool HamiltonianModel::contains_time(double t) const {
    if (const auto* s = std::get_if<SampledHamiltonian>(&body_)) {
        return t >= s->t_min() && t <= s->t_max();
    }
    return std::isfinite(t);
}

// ------------------------------ frame sequences ------------------------------

EigenframeTrajectory eigenframe_trajectory(const HamiltonianModel& model,
                                           const TimeGrid& grid, GaugePolicy initial_gauge) {
    EigenframeTrajectory out{grid, {}, {}};
    out.frames.reserve(static_cast<size_t>(grid.points()));
    Eigen::MatrixXcd h;
    for (int j = 0; j < grid.points(); ++j) {
        model.evaluate_into(grid[j], h);
        Eigenframe frame = eigensystem(HermitianOperator(h), initial_gauge, grid[j]);
        if (j > 0) frame = gauge_continue(out.frames.back(), frame);
        out.frames.push_back(std::move(frame));
    }
    return out;
}

EigenframeTrajectory rotating_field_eigenframes(const RotatingFieldParams& p,
                                                const TimeGrid& grid) {
    EigenframeTrajectory out{grid, {}, {}};
    out.frames.reserve(static_cast<size_t>(grid.points()));
    for (int j = 0; j < grid.points(); ++j) {
        out.frames.push_back(rotating_field_eigenframe(p, grid[j]));
    }
    const Eigen::MatrixXcd d = rotating_field_connection(p);
    out.analytic_connection = [d](double) { return d; };
    return out;
}

namespace {

std::vector<Eigen::MatrixXcd> numeric_frame_connections(const EigenframeTrajectory& frames,
                                                        int fd_order) {
    const int n = static_cast<int>(frames.frames.size());
    const int dim = frames.dim();
    std::vector<Eigen::MatrixXcd> out(static_cast<size_t>(n));
    if (fd_order != 2 && fd_order != 4) {
        throw InvalidArgument("frame_connections: fd_order must be 2 or 4");
    }
    const int w = fd_order;  // stencil uses w + 1 points
    if (n < w + 1) throw InvalidArgument("frame_connections: grid too short for stencil");
    const double h = frames.grid.spacing();

    // stencil rows: coefficients over points [j0, j0 + w] for the derivative
    // at offset r from j0
    auto stencil = [&](int r) -> std::vector<double> {
        if (fd_order == 2) {
            static const std::vector<std::vector<double>> rows = {
                {-1.5, 2.0, -0.5}, {-0.5, 0.0, 0.5}, {0.5, -2.0, 1.5}};
            return rows[static_cast<size_t>(r)];
        }
        static const std::vector<std::vector<double>> rows = {
            {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -0.25},
            {-0.25, -5.0 / 6, 1.5, -0.5, 1.0 / 12},
            {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12},
            {-1.0 / 12, 0.5, -1.5, 5.0 / 6, 0.25},
            {0.25, -4.0 / 3, 3.0, -4.0, 25.0 / 12}};
        return rows[static_cast<size_t>(r)];
    };

    Eigen::MatrixXcd dv(dim, dim);
    for (int j = 0; j < n; ++j) {
        int j0 = j - w / 2;
        j0 = std::clamp(j0, 0, n - w - 1);
        const auto coeffs = stencil(j - j0);
        dv.setZero();
        for (int c = 0; c <= w; ++c) {
            if (coeffs[static_cast<size_t>(c)] == 0.0) continue;
            dv += (coeffs[static_cast<size_t>(c)] / h) * frames.at(j0 + c).vectors;
        }
        out[static_cast<size_t>(j)] = frames.at(j).vectors.adjoint() * dv;
    }
    return out;
}

}  // namespace

std::vector<Eigen::MatrixXcd> frame_connections(const EigenframeTrajectory& frames,
                                                int fd_order) {
    if (frames.has_analytic_connection()) {
        const int n = static_cast<int>(frames.frames.size());
        std::vector<Eigen::MatrixXcd> out(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            out[static_cast<size_t>(j)] = frames.analytic_connection(frames.grid[j]);
        }
        return out;
    }
    return numeric_frame_connections(frames, fd_order);
}

std::vector<double> adiabatic_constraint_ratios(const EigenframeTrajectory& frames, int k) {
    if (k < 0 || k >= frames.dim()) {
        throw InvalidArgument("adiabatic_constraint_ratios: level index out of range");
    }
    const auto conns = numeric_frame_connections(frames, 2);

    std::vector<double> ratios(conns.size(), 0.0);
    for (size_t j = 0; j < conns.size(); ++j) {
        const auto& e = frames.at(static_cast<int>(j)).energies;
        double worst = 0.0;
        for (int m = 0; m < frames.dim(); ++m) {
            if (m == k) continue;
            const double gap = std::abs(e[m] - e[k]);
            if (gap == 0.0) throw DegenerateSpectrum("adiabatic_constraint_ratios: zero gap");
            worst = std::max(worst, std::abs(conns[j](m, k)) / gap);
        }
        ratios[j] = worst;
    }
    return ratios;
}

std::vector<double> adiabatic_constraint_ratios(const HamiltonianModel& model, int k,
                                                const TimeGrid& grid) {
    const EigenframeTrajectory frames =
        model.rotating_field()
            ? rotating_field_eigenframes(*model.rotating_field(), grid)
            : eigenframe_trajectory(model, grid);
    return adiabatic_constraint_ratios(frames, k);
}

}  // namespace geomphase
