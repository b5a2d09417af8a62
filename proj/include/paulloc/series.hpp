#pragma once

#include <cstddef>
#include <vector>

#include "paulloc/common.hpp"

namespace paulloc {

// Time series of ensemble/packet first and second moments.
struct MomentsSeries {
    std::vector<double> t;
    std::vector<double> mean_x, mean_p;
    std::vector<double> sd_x, sd_p;

    std::size_t size() const { return t.size(); }
    void push(double time, double mx, double mp, double sx, double sp) {
        t.push_back(time);
        mean_x.push_back(mx);
        mean_p.push_back(mp);
        sd_x.push_back(sx);
        sd_p.push_back(sp);
    }
};

// Mean over consecutive one-drive-period windows (duration pi), one output
// sample per period stamped at the window's mean time.  Requires a uniformly
// sampled input series with at least one full period.
MomentsSeries cycle_average(const MomentsSeries& in);

// Least-squares slope of y(t) restricted to t in [t_lo, t_hi].
double window_slope(const std::vector<double>& t, const std::vector<double>& y,
                    double t_lo, double t_hi);

// Mean of y(t) over t in [t_lo, t_hi].
double window_mean(const std::vector<double>& t, const std::vector<double>& y,
                   double t_lo, double t_hi);

} // namespace paulloc
