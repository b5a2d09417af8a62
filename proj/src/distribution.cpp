#include "paulloc/distribution.hpp"

#include <cmath>
#include <limits>

namespace paulloc {

void Distribution::normalize() {
    double mass = 0;
    for (double d : density) mass += d;
    mass *= spacing;
    if (!(mass > 0.0)) throw GuardError("distribution: zero total mass");
    for (double& d : density) d /= mass;
}

std::vector<std::int64_t> histogram_counts(const std::vector<double>& samples,
                                           int bins, double lo, double hi) {
    if (bins < 1 || !(lo < hi)) throw ConfigError("histogram: invalid binning");
    std::vector<std::int64_t> counts(bins, 0);
    const double scale = bins / (hi - lo);
    for (double s : samples) {
        if (s < lo || s >= hi) continue;
        auto b = static_cast<int>((s - lo) * scale);
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    return counts;
}

Distribution counts_to_distribution(const std::vector<std::int64_t>& counts,
                                    double lo, double hi) {
    const int bins = static_cast<int>(counts.size());
    const double w = (hi - lo) / bins;
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw ConfigError("histogram: no samples in range");
    Distribution d;
    d.spacing = w;
    d.center.resize(bins);
    d.density.resize(bins);
    for (int i = 0; i < bins; ++i) {
        d.center[i] = lo + (i + 0.5) * w;
        d.density[i] = static_cast<double>(counts[i]) / (static_cast<double>(total) * w);
    }
    return d;
}

Distribution histogram_distribution(const std::vector<double>& samples,
                                    int bins, double lo, double hi) {
    if (samples.empty()) throw ConfigError("histogram: empty sample set");
    return counts_to_distribution(histogram_counts(samples, bins, lo, hi), lo, hi);
}

Distribution average_distributions(const std::vector<Distribution>& snaps) {
    if (snaps.empty()) throw ConfigError("average_distributions: no snapshots");
    Distribution out = snaps.front();
    for (std::size_t k = 1; k < snaps.size(); ++k) {
        const Distribution& s = snaps[k];
        if (s.center.size() != out.center.size() || s.spacing != out.spacing)
            throw ConfigError("average_distributions: mismatched axes");
        for (std::size_t i = 0; i < out.density.size(); ++i)
            out.density[i] += s.density[i];
    }
    out.normalize();
    return out;
}

Distribution rebin_density(const std::vector<double>& center,
                           const std::vector<double>& density, double spacing,
                           int bins, double lo, double hi) {
    if (bins < 1 || !(lo < hi)) throw ConfigError("rebin: invalid binning");
    const double w = (hi - lo) / bins;
    Distribution d;
    d.spacing = w;
    d.center.resize(bins);
    d.density.assign(bins, 0.0);
    for (int i = 0; i < bins; ++i) d.center[i] = lo + (i + 0.5) * w;
    for (std::size_t i = 0; i < center.size(); ++i) {
        if (center[i] < lo || center[i] >= hi) continue;
        auto b = static_cast<int>((center[i] - lo) / w);
        if (b >= bins) b = bins - 1;
        d.density[b] += density[i] * spacing; // deposit mass
    }
    d.normalize();
    return d;
}

std::vector<Peak> find_peaks(const Distribution& d) {
    std::vector<Peak> peaks;
    const auto& y = d.density;
    const int n = static_cast<int>(y.size());
    for (int i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        int j = i;
        while (j > 0 && y[j - 1] <= y[j]) --j;
        int k = i;
        while (k + 1 < n && y[k + 1] <= y[k]) ++k;
        Peak p;
        p.x = d.center[i];
        p.height = y[i];
        p.background = std::max(y[j], y[k]);
        p.ratio = p.background > 0 ? p.height / p.background
                                   : std::numeric_limits<double>::infinity();
        peaks.push_back(p);
    }
    return peaks;
}

} // namespace paulloc
