#pragma once

#include <cstdint>
#include <vector>

#include "paulloc/common.hpp"

namespace paulloc {

// Normalized density on a uniform axis: sum(density) * spacing == 1.
struct Distribution {
    std::vector<double> center;
    std::vector<double> density;
    double spacing = 0.0;

    void normalize();
};

// Histogram of scalar samples over [lo, hi) with equal bins, normalized to a
// density.  Samples outside the range are dropped.  Throws on empty input.
Distribution histogram_distribution(const std::vector<double>& samples,
                                    int bins, double lo, double hi);

// Raw integer bin counts (deterministic accumulation building block).
std::vector<std::int64_t> histogram_counts(const std::vector<double>& samples,
                                           int bins, double lo, double hi);

Distribution counts_to_distribution(const std::vector<std::int64_t>& counts,
                                    double lo, double hi);

// Arithmetic mean of several distributions on the same axis, renormalized.
Distribution average_distributions(const std::vector<Distribution>& snaps);

// Aggregate a fine-grained density onto a coarse uniform binning (mass is
// deposited into the bin containing each source point).
Distribution rebin_density(const std::vector<double>& center,
                           const std::vector<double>& density, double spacing,
                           int bins, double lo, double hi);

struct Peak {
    double x = 0.0;       // center of the peaked bin
    double height = 0.0;
    double background = 0.0; // larger of the two flanking local minima
    double ratio = 0.0;   // height / background
};

// Local maxima with their flanking-minima background levels.
std::vector<Peak> find_peaks(const Distribution& d);

} // namespace paulloc
