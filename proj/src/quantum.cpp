#include "geomphase/quantum.hpp"

#include <cmath>

namespace geomphase {

namespace {

void require_finite(const Eigen::VectorXcd& v, const char* what) {
    if (!v.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entries");
}

}  // namespace

StateVector::StateVector(Eigen::VectorXcd amplitudes) {
    require_finite(amplitudes, "StateVector");
    if (amplitudes.size() < 2) throw InvalidArgument("StateVector: dim must be >= 2");
    if (std::abs(amplitudes.norm() - 1.0) > kStateNormTol) {
        throw InvalidArgument("StateVector: norm deviates from 1 by more than 1e-9");
    }
    v_ = std::move(amplitudes);
}

StateVector StateVector::unchecked(Eigen::VectorXcd amplitudes) {
    require_finite(amplitudes, "StateVector");
    if (amplitudes.size() < 2) throw InvalidArgument("StateVector: dim must be >= 2");
    StateVector s;
    s.v_ = std::move(amplitudes);
    return s;
}

HermitianOperator::HermitianOperator(const Eigen::MatrixXcd& entries) {
    if (entries.rows() != entries.cols() || entries.rows() < 2) {
        throw InvalidArgument("HermitianOperator: need a square matrix of dim >= 2");
    }
    if (!entries.allFinite()) {
        throw InvalidArgument("HermitianOperator: non-finite entries");
    }
    const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kHermitianAsymTol) {
        throw InvalidArgument("HermitianOperator: asymmetry " + std::to_string(asym) +
                              " exceeds 1e-10");
    }
    m_ = 0.5 * (entries + entries.adjoint().eval());
}

StateVector Eigenframe::vector(int m) const {
    if (m < 0 || m >= dim()) throw InvalidArgument("Eigenframe: level index out of range");
    return StateVector::unchecked(vectors.col(m));
}

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("inner_product: dimension mismatch");
    return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left side
}

namespace {

// Rotate column m so its largest-magnitude component is real positive.
void fix_gauge_largest_component(Eigen::MatrixXcd& vectors) {
    for (Eigen::Index m = 0; m < vectors.cols(); ++m) {
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double mag = std::abs(vectors(i, m));
            if (mag > best + 1e-12) {
                best = mag;
                pivot = i;
            }
        }
        const cplx p = vectors(pivot, m);
        if (std::abs(p) > 0.0) {
            vectors.col(m) *= std::conj(p) / std::abs(p);
        }
    }
}

}  // namespace

Eigenframe eigensystem(const HermitianOperator& H, GaugePolicy gauge, double time) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error("eigensystem: eigendecomposition failed");
    }
    Eigenframe frame;
    frame.time = time;
    frame.energies = solver.eigenvalues();  // ascending
    frame.vectors = solver.eigenvectors();

    const int n = frame.dim();
    const double range = frame.energies[n - 1] - frame.energies[0];
    double min_gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m + 1 < n; ++m) {
        min_gap = std::min(min_gap, frame.energies[m + 1] - frame.energies[m]);
    }
    if (!(min_gap > kDegeneracyRelTol * range) || range == 0.0) {
        throw DegenerateSpectrum("eigensystem: eigenvalue gap " + std::to_string(min_gap) +
                                 " below degeneracy tolerance");
    }

    const double residual = (H.matrix() * frame.vectors -
                             frame.vectors * frame.energies.asDiagonal().toDenseMatrix().cast<cplx>())
                                .norm();
    if (residual > 1e-9 * std::max(H.frobenius_norm(), 1e-300)) {
        throw Error("eigensystem: residual exceeds 1e-9 * |H|");
    }

    if (gauge == GaugePolicy::LargestComponentRealPositive) {
        fix_gauge_largest_component(frame.vectors);
    }
    return frame;
}

Eigenframe gauge_continue(const Eigenframe& prev, const Eigenframe& cur) {
    if (prev.dim() != cur.dim()) {
        throw DimensionMismatch("gauge_continue: frame dimensions differ");
    }
    Eigenframe out = cur;
    for (int m = 0; m < cur.dim(); ++m) {
        const cplx ov = prev.vectors.col(m).dot(cur.vectors.col(m));
        const double mag = std::abs(ov);
        if (mag < kContinuationMinOverlap) {
            throw ContinuationBreakdown(
                "gauge_continue: level " + std::to_string(m) + " overlap " +
                std::to_string(mag) + " too small; time step too coarse");
        }
        const double phi = std::atan2(ov.imag(), ov.real());
        if (std::abs(phi) > 1e-14) {
            out.vectors.col(m) *= std::polar(1.0, -phi);
        }
    }
    return out;
}

double projector_deviation(const StateVector& psi, const StateVector& phi) {
    if (psi.dim() != phi.dim()) {
        throw DimensionMismatch("projector_deviation: dimension mismatch");
    }
    // ||P - Q||_F^2 = |psi|^4 + |phi|^4 - 2|<psi|phi>|^2; for unit states this
    // is 2(1 - |<psi|phi>|^2), but keeping the norms explicit stays exact for
    // trajectory states carrying integrator drift.
    const double np = psi.amplitudes().squaredNorm();
    const double nq = phi.amplitudes().squaredNorm();
    const double ov = std::norm(psi.amplitudes().dot(phi.amplitudes()));
    const double sq = np * np + nq * nq - 2.0 * ov;
    return std::sqrt(std::max(sq, 0.0));
}

}  // namespace geomphase
