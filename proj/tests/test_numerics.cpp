#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "geomphase/numerics.hpp"

using namespace geomphase;

TEST_CASE("wrap_angle folds into (-pi, pi] with antipodal values going to +pi") {
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(2.0 * M_PI + 0.25) == doctest::Approx(0.25));
    CHECK(wrap_angle(-7.5 * M_PI) == doctest::Approx(0.5 * M_PI));
}

TEST_CASE("simpson integrates cubics exactly and sin to O(h^4)") {
    const int n = 201;
    const double h = 1.0 / (n - 1);
    std::vector<double> cubic(n), sine(n);
    for (int j = 0; j < n; ++j) {
        const double x = j * h;
        cubic[static_cast<size_t>(j)] = x * x * x - 2.0 * x + 1.0;
        sine[static_cast<size_t>(j)] = std::sin(5.0 * x);
    }
    CHECK(simpson(cubic, h) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(simpson(sine, h) == doctest::Approx((1.0 - std::cos(5.0)) / 5.0).epsilon(1e-9));
    CHECK_THROWS_AS(simpson(std::vector<double>{1.0, 2.0}, h), InvalidArgument);
    CHECK_THROWS_AS(simpson(std::vector<double>{1.0, 2.0, 3.0, 4.0}, h), InvalidArgument);
}

TEST_CASE("simpson_prefix matches whole-interval simpson and stays O(h^4) at odd indices") {
    const int n = 401;
    const double h = 2.0 / (n - 1);
    std::vector<double> f(n);
    for (int j = 0; j < n; ++j) f[static_cast<size_t>(j)] = std::exp(0.7 * j * h);
    const auto prefix = simpson_prefix(f, h);
    CHECK(prefix.back() == doctest::Approx(simpson(f, h)).epsilon(1e-15));
    for (int j : {37, 151, 399}) {
        const double exact = (std::exp(0.7 * j * h) - 1.0) / 0.7;
        CHECK(prefix[static_cast<size_t>(j)] == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("unwrap_path tracks many turns of a spiral") {
    const int n = 2001;
    std::vector<cplx> z(n);
    for (int j = 0; j < n; ++j) {
        const double t = 40.0 * j / (n - 1);  // > 6 turns
        z[static_cast<size_t>(j)] = std::polar(1.0 + 0.1 * t, t);
    }
    const auto phi = unwrap_path(z);
    CHECK(phi.front() == doctest::Approx(0.0));
    CHECK(phi.back() == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("unwrap_path bridges an exact zero with the +pi convention") {
    // real-axis pass through 0: 1, 0, -1
    std::vector<cplx> z = {cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(-1.0, 0.0), cplx(0.0, -1.0)};
    const auto phi = unwrap_path(z);
    CHECK(phi[0] == doctest::Approx(0.0));
    CHECK(phi[1] == doctest::Approx(M_PI / 2.0));
    CHECK(phi[2] == doctest::Approx(M_PI));
    CHECK(phi[3] == doctest::Approx(3.0 * M_PI / 2.0));
}

TEST_CASE("unwrap_arg_of follows fast winding and resolves zero crossings") {
    const double rate = 100.0;
    auto f = [rate](double t) { return std::polar(2.0, -rate * t); };
    CHECK(unwrap_arg_of(f, 7.0, rate) == doctest::Approx(-700.0).epsilon(1e-12));

    // cos passes through zero at pi/2 + k pi; convention gives +pi per pass
    auto g = [](double t) { return cplx(std::cos(t), 0.0); };
    CHECK(unwrap_arg_of(g, 2.0 * M_PI, 1.0) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));

    // endpoint exactly on a zero: two-sided limit average
    CHECK(unwrap_arg_of(g, 0.5 * M_PI, 1.0) == doctest::Approx(0.5 * M_PI).epsilon(1e-9));
}

TEST_CASE("differentiate reaches its stated order on smooth data") {
    const int n = 101;
    const double h = 1.0 / (n - 1);
    std::vector<double> f(n);
    std::vector<cplx> fc(n);
    for (int j = 0; j < n; ++j) {
        const double x = j * h;
        f[static_cast<size_t>(j)] = std::sin(3.0 * x);
        fc[static_cast<size_t>(j)] = std::polar(1.0, 4.0 * x);
    }
    const auto d2 = differentiate(std::span<const double>(f), h, 2);
    const auto d4 = differentiate(std::span<const double>(f), h, 4);
    const auto dc = differentiate(std::span<const cplx>(fc), h, 4);
    double worst2 = 0.0, worst4 = 0.0, worstc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = j * h;
        worst2 = std::max(worst2, std::abs(d2[static_cast<size_t>(j)] - 3.0 * std::cos(3.0 * x)));
        worst4 = std::max(worst4, std::abs(d4[static_cast<size_t>(j)] - 3.0 * std::cos(3.0 * x)));
        worstc = std::max(worstc, std::abs(dc[static_cast<size_t>(j)] -
                                           cplx(0.0, 4.0) * std::polar(1.0, 4.0 * x)));
    }
    CHECK(worst2 < 3.0 * 9.0 * h * h);  // ~ f''' h^2
    CHECK(worst4 < 1e-6);
    CHECK(worstc < 1e-5);
    CHECK(worst4 < worst2 / 50.0);
}

TEST_CASE("least_squares_slope recovers a line and rejects degenerate input") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> y;
    for (double v : x) y.push_back(-0.37 * v + 2.0);
    CHECK(least_squares_slope(x, y) == doctest::Approx(-0.37).epsilon(1e-14));
    std::vector<double> same(5, 1.0);
    CHECK_THROWS_AS(least_squares_slope(same, y), InvalidArgument);
}
