// numerics.hpp — quadrature, finite differences, and phase-unwrapping helpers
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "geomphase/errors.hpp"

namespace geomphase {

using cplx = std::complex<double>;

// Fold an angle into (-pi, pi]. Antipodal differences map to +pi, which is
// the branch convention used everywhere a phase passes exactly through zero.
double wrap_angle(double phi);

// Composite Simpson on a uniform grid; requires an odd point count (even
// number of subintervals).
double simpson(std::span<const double> f, double spacing);

// Running composite Simpson: result[j] = integral over [t_0, t_j] for even j.
// Odd j are filled with the half-panel Newton-Cotes closure (same O(h^4)
// order), so the vector is usable at every index.
std::vector<double> simpson_prefix(std::span<const double> f, double spacing);

// Principal args of a complex series unwrapped into a continuous branch
// starting at arg(z[0]) (which must be well defined). Samples with
// |z| < zero_tol are bridged: the phase jump is taken between the flanking
// good samples and split evenly across the gap, with antipodal jumps
// resolved to +pi.
std::vector<double> unwrap_path(std::span<const cplx> z, double zero_tol = 1e-12);

// Continuously tracked arg of f over [0, x]; f(0) must be nonzero. The
// initial sampling resolves `rate_bound` (radians of phase per unit x) and
// intervals are bisected until each phase increment is below pi/2. Isolated
// zeros of f are crossed with the +pi convention above; if f(x) itself is
// zero the two-sided limit average is returned.
double unwrap_arg_of(const std::function<cplx(double)>& f, double x,
                     double rate_bound, double zero_tol = 1e-13);

// First derivative of a uniformly sampled series, 2nd or 4th order central
// stencils with matching one-sided stencils at the edges.
std::vector<double> differentiate(std::span<const double> f, double spacing,
                                  int order = 4);
std::vector<cplx> differentiate(std::span<const cplx> f, double spacing,
                                int order = 4);

// Ordinary least-squares slope of y against x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace geomphase
