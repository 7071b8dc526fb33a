#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "geomphase/quantum.hpp"
#include "support/helpers.hpp"

using namespace geomphase;

namespace {

StateVector basis_state(int dim, int i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[i] = 1.0;
    return StateVector(std::move(v));
}

}  // namespace

TEST_CASE("inner_product: identity, orthogonality, conjugate linearity") {
    const StateVector e1 = basis_state(2, 0);
    const StateVector e2 = basis_state(2, 1);
    CHECK(std::abs(inner_product(e1, e1) - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(inner_product(e1, e2)) < 1e-15);

    // the model eigenvectors at t=0, theta=pi/3 are orthogonal
    const StateVector a = StateVector(oracle::e1(1.0, M_PI / 3.0, 0.0));
    const StateVector b = StateVector(oracle::e2(1.0, M_PI / 3.0, 0.0));
    CHECK(std::abs(inner_product(a, b)) < 1e-15);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector x = StateVector(testutil::random_unit_vector(3, rng));
        const StateVector y = StateVector(testutil::random_unit_vector(3, rng));
        CHECK(std::abs(inner_product(x, x) - 1.0) < 1e-12);
        const cplx phase = std::polar(1.0, 0.7);
        const StateVector xp = StateVector(Eigen::VectorXcd(phase * x.amplitudes()));
        CHECK(std::abs(inner_product(xp, y) - std::conj(phase) * inner_product(x, y)) < 1e-14);
    }
    CHECK_THROWS_AS(inner_product(e1, basis_state(3, 0)), DimensionMismatch);
}

TEST_CASE("StateVector validates norm, finiteness, and dimension") {
    Eigen::VectorXcd bad(2);
    bad << 1.0, 1.0;
    CHECK_THROWS_AS(StateVector{bad}, InvalidArgument);
    Eigen::VectorXcd tiny(1);
    tiny << 1.0;
    CHECK_THROWS_AS(StateVector{tiny}, InvalidArgument);
    Eigen::VectorXcd nan(2);
    nan << std::nan(""), 0.0;
    CHECK_THROWS_AS(StateVector{nan}, InvalidArgument);
}

TEST_CASE("HermitianOperator symmetrizes small asymmetry and rejects large") {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, cplx(0.5, 0.25 + 4e-11), cplx(0.5, -0.25), -1.0;
    const HermitianOperator h(m);
    CHECK((h.matrix() - h.matrix().adjoint()).norm() == 0.0);

    m(0, 1) = cplx(0.5, 0.25 + 1e-8);
    CHECK_THROWS_AS(HermitianOperator{m}, InvalidArgument);
}

TEST_CASE("eigensystem: diagonal matrix, model matrix, and degenerate failure") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = -1.0;
    d(1, 1) = 1.0;
    const Eigenframe frame = eigensystem(HermitianOperator(d));
    CHECK(frame.energies[0] == doctest::Approx(-1.0));
    CHECK(frame.energies[1] == doctest::Approx(1.0));
    CHECK(std::abs(frame.vectors(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(frame.vectors(1, 1) - 1.0) < 1e-14);

    // rotating-field matrix at t=0, omega0=2, theta=pi/2: energies -1, +1 and
    // the +1 eigenvector is ray-equal to the closed-form one
    const Eigen::Matrix2cd h = oracle::spin_hamiltonian(2.0, 1.0, M_PI / 2.0, 0.0);
    const Eigenframe f2 = eigensystem(HermitianOperator(h));
    CHECK(f2.energies[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(f2.energies[1] == doctest::Approx(1.0).epsilon(1e-14));
    const StateVector up = f2.vector(1);
    const StateVector ray = StateVector(oracle::e1(1.0, M_PI / 2.0, 0.0));
    CHECK(projector_deviation(up, ray) < 1e-9);

    CHECK_THROWS_AS(eigensystem(HermitianOperator(Eigen::MatrixXcd::Zero(2, 2))),
                    DegenerateSpectrum);
    Eigen::MatrixXcd near = Eigen::MatrixXcd::Zero(2, 2);
    near(0, 0) = 1.0;
    near(1, 1) = 1.0 + 1e-12;
    CHECK_THROWS_AS(eigensystem(HermitianOperator(near)), DegenerateSpectrum);
}

TEST_CASE("eigensystem reconstruction property: sum E_m v_m v_m^dag rebuilds H") {
    std::mt19937_64 rng(23);
    for (int dim : {2, 3, 5, 8}) {
        for (int trial = 0; trial < 5; ++trial) {
            const Eigen::MatrixXcd h = testutil::random_hermitian(dim, rng, 3.0);
            Eigenframe frame{};
            try {
                frame = eigensystem(HermitianOperator(h));
            } catch (const DegenerateSpectrum&) {
                continue;  // random draw too close to degenerate; not the point here
            }
            Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(dim, dim);
            for (int m = 0; m < dim; ++m) {
                rebuilt += frame.energies[m] * frame.vectors.col(m) *
                           frame.vectors.col(m).adjoint();
            }
            CHECK((rebuilt - h).norm() < 1e-8 * h.norm());
            // pairwise orthonormality
            CHECK((frame.vectors.adjoint() * frame.vectors -
                   Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("eigensystem gauge policy: largest component real positive, ties to lowest index") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXcd h = testutil::random_hermitian(4, rng, 2.0);
        Eigenframe frame{};
        try {
            frame = eigensystem(HermitianOperator(h));
        } catch (const DegenerateSpectrum&) {
            continue;
        }
        for (int m = 0; m < 4; ++m) {
            Eigen::Index pivot = 0;
            frame.vectors.col(m).cwiseAbs().maxCoeff(&pivot);
            const cplx p = frame.vectors(pivot, m);
            CHECK(p.real() > 0.0);
            CHECK(std::abs(p.imag()) < 1e-12 * std::abs(p));
        }
    }
}

TEST_CASE("gauge_continue: identity, pure gauge removal, idempotence, breakdown") {
    const Eigenframe f0 = eigensystem(HermitianOperator(
        oracle::spin_hamiltonian(2.0, 1.0, 1.2, 0.0)));

    const Eigenframe same = gauge_continue(f0, f0);
    CHECK((same.vectors - f0.vectors).cwiseAbs().maxCoeff() == 0.0);

    Eigenframe rotated = f0;
    rotated.vectors.col(0) *= std::polar(1.0, 2.1);
    rotated.vectors.col(1) *= std::polar(1.0, -0.4);
    const Eigenframe restored = gauge_continue(f0, rotated);
    CHECK((restored.vectors - f0.vectors).cwiseAbs().maxCoeff() < 1e-14);

    // a second pass with the same prev must leave the result bit-identical
    const Eigenframe once = gauge_continue(f0, rotated);
    const Eigenframe twice = gauge_continue(f0, once);
    CHECK((twice.vectors - once.vectors).cwiseAbs().maxCoeff() == 0.0);

    // orthogonal frames cannot be tracked
    Eigenframe far = f0;
    far.vectors.col(0).swap(far.vectors.col(1));
    CHECK_THROWS_AS(gauge_continue(f0, far), ContinuationBreakdown);
}

TEST_CASE("gauge_continue on model frames at nearby times leaves a real positive overlap") {
    const double w = 1.0, th = 0.7;
    const double dt = 1e-3 * 2.0 * M_PI / w;
    Eigenframe a{0.0, Eigen::VectorXd(2), Eigen::MatrixXcd(2, 2)};
    a.energies << 1.0, -1.0;
    a.vectors.col(0) = oracle::e1(w, th, 0.0);
    a.vectors.col(1) = oracle::e2(w, th, 0.0);
    Eigenframe b = a;
    b.time = dt;
    b.vectors.col(0) = std::polar(1.0, 0.3) * oracle::e1(w, th, dt);  // extra junk gauge
    b.vectors.col(1) = std::polar(1.0, -1.1) * oracle::e2(w, th, dt);
    const Eigenframe adj = gauge_continue(a, b);
    for (int m = 0; m < 2; ++m) {
        const cplx ov = a.vectors.col(m).dot(adj.vectors.col(m));
        CHECK(ov.real() > 0.0);
        CHECK(std::abs(ov.imag()) < 1e-12);
    }
}

TEST_CASE("projector_deviation: coincident, orthogonal, and gauge-invariant") {
    const StateVector e1 = basis_state(3, 0);
    const StateVector e2 = basis_state(3, 1);
    CHECK(projector_deviation(e1, e1) == doctest::Approx(0.0));
    CHECK(projector_deviation(e1, e2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector x = StateVector(testutil::random_unit_vector(4, rng));
        const StateVector y = StateVector(testutil::random_unit_vector(4, rng));
        const double base = projector_deviation(x, y);
        const StateVector xg = StateVector(
            Eigen::VectorXcd(std::polar(1.0, 1.3) * x.amplitudes()));
        const StateVector yg = StateVector(
            Eigen::VectorXcd(std::polar(1.0, -2.7) * y.amplitudes()));
        CHECK(std::abs(projector_deviation(xg, yg) - base) < 1e-12);
    }
}

TEST_CASE("projector_deviation matches the explicit coefficient form of the spin gap") {
    const double w0 = 100.0, w = 1.0, th = M_PI / 2.0;
    const double t = M_PI;
    const StateVector psi = StateVector(oracle::spin_state(w0, w, th, t));
    const StateVector e1 = StateVector(oracle::e1(w, th, t));
    const double expected = oracle::projector_gap_coefficients(w0, w, th, t);
    CHECK(projector_deviation(psi, e1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("spin-model ray distance stays below 2 w sin(theta)/wbar across a period") {
    for (double w0 : {100.0, 1000.0}) {
        const double w = 1.0, th = M_PI / 2.0;
        const double bound = 2.0 * w * std::sin(th) / oracle::wbar(w0, w, th);
        const int n = 200001;
        double sup = 0.0;
        for (int j = 0; j < n; ++j) {
            const double t = 2.0 * M_PI * j / (n - 1);
            const StateVector psi = StateVector(oracle::spin_state(w0, w, th, t));
            const StateVector e1 = StateVector(oracle::e1(w, th, t));
            sup = std::max(sup, projector_deviation(psi, e1));
        }
        CHECK(sup <= bound);
        CHECK(sup > 0.5 * bound);  // the bound is tight up to sqrt(2)/2
    }
}
