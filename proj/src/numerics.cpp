#include "geomphase/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace geomphase {

double wrap_angle(double phi) {
    double w = std::remainder(phi, 2.0 * M_PI);
    if (w <= -M_PI) w = M_PI;  // remainder returns [-pi, pi]; fold -pi up
    return w;
}

double simpson(std::span<const double> f, double spacing) {
    const size_t n = f.size();
    if (n < 3 || n % 2 == 0) {
        throw InvalidArgument("simpson: need an odd number of samples (>= 3)");
    }
    double odd = 0.0, even = 0.0;
    for (size_t j = 1; j + 1 < n; j += 2) odd += f[j];
    for (size_t j = 2; j + 1 < n; j += 2) even += f[j];
    return spacing / 3.0 * (f.front() + f.back() + 4.0 * odd + 2.0 * even);
}

std::vector<double> simpson_prefix(std::span<const double> f, double spacing) {
    const size_t n = f.size();
    if (n < 3 || n % 2 == 0) {
        throw InvalidArgument("simpson_prefix: need an odd number of samples (>= 3)");
    }
    std::vector<double> out(n, 0.0);
    for (size_t j = 2; j < n; j += 2) {
        out[j] = out[j - 2] + spacing / 3.0 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
    }
    // half-panel closure at odd indices (3-point rule over [t_{j-1}, t_j]);
    // n is odd so j + 1 is always in range here
    for (size_t j = 1; j < n; j += 2) {
        out[j] = out[j - 1] + spacing / 12.0 * (5.0 * f[j - 1] + 8.0 * f[j] - f[j + 1]);
    }
    return out;
}

std::vector<double> unwrap_path(std::span<const cplx> z, double zero_tol) {
    const size_t n = z.size();
    if (n == 0) return {};
    std::vector<double> phi(n, 0.0);
    if (std::abs(z[0]) < zero_tol) {
        throw InvalidArgument("unwrap_path: first sample has no defined phase");
    }
    phi[0] = std::arg(z[0]);
    size_t last_good = 0;
    double last_arg = phi[0];
    for (size_t j = 1; j < n; ++j) {
        if (std::abs(z[j]) < zero_tol) continue;
        const double aj = std::arg(z[j]);
        const double jump = wrap_angle(aj - last_arg);
        const double base = phi[last_good];
        const size_t gap = j - last_good;
        for (size_t m = last_good + 1; m <= j; ++m) {
            phi[m] = base + jump * static_cast<double>(m - last_good) / static_cast<double>(gap);
        }
        phi[j] = base + jump;
        last_good = j;
        last_arg = aj;
    }
    if (last_good + 1 < n) {
        // trailing degenerate samples: extend by the half-jump convention
        for (size_t m = last_good + 1; m < n; ++m) phi[m] = phi[last_good] + M_PI / 2.0;
    }
    return phi;
}

namespace {

// Phase increment of f between (x0, z0) and (x1, z1), bisecting until each
// sub-increment is below pi/2. Zeros inside the interval are stepped over
// with a small symmetric excursion; wrap_angle resolves the antipodal case
// to +pi.
double arg_increment(const std::function<cplx(double)>& f, double x0, cplx z0,
                     double x1, cplx z1, double zero_tol, int depth) {
    const double d = wrap_angle(std::arg(z1) - std::arg(z0));
    if (std::abs(d) <= M_PI / 2.0 || depth <= 0) return d;
    const double xm = 0.5 * (x0 + x1);
    cplx zm = f(xm);
    if (std::abs(zm) < zero_tol) {
        const double eps = std::max(std::abs(x1 - x0) * 1e-7, 1e-300);
        const cplx zl = f(xm - eps);
        const cplx zr = f(xm + eps);
        return arg_increment(f, x0, z0, xm - eps, zl, zero_tol, depth - 1)
             + wrap_angle(std::arg(zr) - std::arg(zl))
             + arg_increment(f, xm + eps, zr, x1, z1, zero_tol, depth - 1);
    }
    return arg_increment(f, x0, z0, xm, zm, zero_tol, depth - 1)
         + arg_increment(f, xm, zm, x1, z1, zero_tol, depth - 1);
}

}  // namespace

double unwrap_arg_of(const std::function<cplx(double)>& f, double x,
                     double rate_bound, double zero_tol) {
    const cplx z0 = f(0.0);
    if (std::abs(z0) < zero_tol) {
        throw InvalidArgument("unwrap_arg_of: f(0) has no defined phase");
    }
    if (x == 0.0) return std::arg(z0);

    long long n = 32;
    if (rate_bound > 0.0) {
        const double needed = std::ceil(std::abs(x) * rate_bound / (M_PI / 8.0));
        if (needed > 2e7) throw InvalidArgument("unwrap_arg_of: rate bound too large");
        n = std::max(n, static_cast<long long>(needed));
    }

    const double h = x / static_cast<double>(n);
    double phi = std::arg(z0);
    double xprev = 0.0;
    cplx zprev = z0;
    for (long long j = 1; j <= n; ++j) {
        const double xj = (j == n) ? x : h * static_cast<double>(j);
        cplx zj = f(xj);
        if (std::abs(zj) < zero_tol) {
            if (j == n) {
                // endpoint sits exactly on a zero: return the two-sided limit
                const double eps = std::max(std::abs(h) * 1e-7, 1e-300);
                const cplx zl = f(xj - eps);
                const cplx zr = f(xj + eps);
                phi += arg_increment(f, xprev, zprev, xj - eps, zl, zero_tol, 48);
                phi += 0.5 * wrap_angle(std::arg(zr) - std::arg(zl));
                return phi;
            }
            continue;  // interior zero sample; next step bridges it
        }
        phi += arg_increment(f, xprev, zprev, xj, zj, zero_tol, 48);
        xprev = xj;
        zprev = zj;
    }
    return phi;
}

namespace {

template <typename T>
std::vector<T> differentiate_impl(std::span<const T> f, double h, int order) {
    const size_t n = f.size();
    if (order != 2 && order != 4) {
        throw InvalidArgument("differentiate: order must be 2 or 4");
    }
    if ((order == 2 && n < 3) || (order == 4 && n < 5)) {
        throw InvalidArgument("differentiate: series too short for stencil");
    }
    std::vector<T> d(n);
    if (order == 2) {
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        for (size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
        d[n - 1] = (f[n - 3] - 4.0 * f[n - 2] + 3.0 * f[n - 1]) / (2.0 * h);
        return d;
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    for (size_t j = 2; j + 2 < n; ++j) {
        d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
    }
    d[n - 2] = (-f[n - 5] + 6.0 * f[n - 4] - 18.0 * f[n - 3] + 10.0 * f[n - 2] + 3.0 * f[n - 1]) / (12.0 * h);
    d[n - 1] = (3.0 * f[n - 5] - 16.0 * f[n - 4] + 36.0 * f[n - 3] - 48.0 * f[n - 2] + 25.0 * f[n - 1]) / (12.0 * h);
    return d;
}

}  // namespace

std::vector<double> differentiate(std::span<const double> f, double spacing, int order) {
    return differentiate_impl<double>(f, spacing, order);
}

std::vector<cplx> differentiate(std::span<const cplx> f, double spacing, int order) {
    return differentiate_impl<cplx>(f, spacing, order);
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidArgument("least_squares_slope: need two equal-length series");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("least_squares_slope: x values are constant");
    return sxy / sxx;
}

}  // namespace geomphase
