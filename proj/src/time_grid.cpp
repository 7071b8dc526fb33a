#include "geomphase/time_grid.hpp"

#include <cmath>
#include <limits>

namespace geomphase {

TimeGrid::TimeGrid(double t0, double t1, int intervals) {
    times_.resize(static_cast<size_t>(intervals) + 1);
    spacing_ = (t1 - t0) / intervals;
    for (int j = 0; j <= intervals; ++j) {
        times_[static_cast<size_t>(j)] = t0 + j * spacing_;
    }
    times_.back() = t1;
}

TimeGrid TimeGrid::uniform(double t0, double t1, int intervals) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
        throw InvalidArgument("TimeGrid: need finite t1 > t0");
    }
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    return TimeGrid(t0, t1, intervals);
}

TimeGrid TimeGrid::for_rate(double t0, double t1, double rate, int min_intervals) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0)) {
        throw InvalidArgument("TimeGrid: need finite t1 > t0");
    }
    if (!std::isfinite(rate)) {
        throw InvalidArgument("TimeGrid: rate must be finite");
    }
    long long n = min_intervals;
    if (rate > 0.0) {
        const double max_spacing = (2.0 * M_PI / rate) / 200.0;
        const double needed = std::ceil((t1 - t0) / max_spacing);
        if (needed > 5e8) {
            throw InvalidArgument("TimeGrid: rate requires more than 5e8 points");
        }
        if (static_cast<long long>(needed) > n) n = static_cast<long long>(needed);
    }
    return uniform(t0, t1, static_cast<int>(n));
}

}  // namespace geomphase
