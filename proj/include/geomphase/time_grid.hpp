// time_grid.hpp — uniform output grids for trajectories and frame sequences
#pragma once

#include <vector>

#include "geomphase/errors.hpp"

namespace geomphase {

// Uniform time grid on [t0, t1] with an even number of subintervals, so that
// composite Simpson quadrature applies to the whole grid without padding.
class TimeGrid {
public:
    // Grid with `intervals` uniform subintervals (bumped up to the next even
    // count; at least 2).
    static TimeGrid uniform(double t0, double t1, int intervals);

    // Grid dense enough to resolve oscillations at angular frequency `rate`:
    // spacing <= (2*pi/rate)/200. `rate` <= 0 means no oscillation to resolve
    // and only `min_intervals` applies.
    static TimeGrid for_rate(double t0, double t1, double rate,
                             int min_intervals = 400);

    double t0() const { return times_.front(); }
    double t1() const { return times_.back(); }
    double span() const { return t1() - t0(); }
    double spacing() const { return spacing_; }
    int points() const { return static_cast<int>(times_.size()); }
    int intervals() const { return points() - 1; }
    double operator[](int i) const { return times_[static_cast<size_t>(i)]; }
    const std::vector<double>& times() const { return times_; }

private:
    TimeGrid(double t0, double t1, int intervals);

    std::vector<double> times_;
    double spacing_ = 0.0;
};

}  // namespace geomphase
