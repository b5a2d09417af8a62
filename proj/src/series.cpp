#include "paulloc/series.hpp"

#include <cmath>

namespace paulloc {

MomentsSeries cycle_average(const MomentsSeries& in) {
    const std::size_t n = in.size();
    if (n < 2) throw ConfigError("cycle_average: need at least two samples");
    const double dt = in.t[1] - in.t[0];
    if (!(dt > 0.0)) throw ConfigError("cycle_average: times must be increasing");
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(in.t[i] - in.t[i - 1] - dt) > 1e-9 * (1.0 + std::abs(dt)))
            throw ConfigError("cycle_average: series must be uniformly sampled");
    }
    const auto w = static_cast<std::size_t>(std::llround(PI / dt));
    if (w < 1 || std::abs(w * dt - PI) > 1e-6)
        throw ConfigError("cycle_average: sample spacing does not divide the drive period");
    if (n < w) throw ConfigError("cycle_average: series shorter than one drive period");

    MomentsSeries out;
    for (std::size_t start = 0; start + w <= n; start += w) {
        double st = 0, sx = 0, sp = 0, ssx = 0, ssp = 0;
        for (std::size_t i = start; i < start + w; ++i) {
            st += in.t[i];
            sx += in.mean_x[i];
            sp += in.mean_p[i];
            ssx += in.sd_x[i];
            ssp += in.sd_p[i];
        }
        const double inv = 1.0 / static_cast<double>(w);
        out.push(st * inv, sx * inv, sp * inv, ssx * inv, ssp * inv);
    }
    return out;
}

double window_slope(const std::vector<double>& t, const std::vector<double>& y,
                    double t_lo, double t_hi) {
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        n += 1;
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
    }
    if (n < 2) throw ConfigError("window_slope: fewer than two samples in window");
    const double det = n * stt - st * st;
    return (n * sty - st * sy) / det;
}

double window_mean(const std::vector<double>& t, const std::vector<double>& y,
                   double t_lo, double t_hi) {
    double n = 0, sy = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi) continue;
        n += 1;
        sy += y[i];
    }
    if (n < 1) throw ConfigError("window_mean: empty window");
    return sy / n;
}

} // namespace paulloc
