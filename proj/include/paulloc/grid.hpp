#pragma once

#include <vector>

#include "paulloc/common.hpp"

namespace paulloc {

// Uniform position grid with the FFT momentum assignment p_j = kbar (2pi/L) j,
// j running over the symmetric alias range in FFT order.
struct Grid {
    double x_min = -80.0;
    double x_max = 80.0;
    int n = 4096;        // power of two
    double kbar = 0.29;

    Grid() = default;
    Grid(double x_min_, double x_max_, int n_, double kbar_)
        : x_min(x_min_), x_max(x_max_), n(n_), kbar(kbar_) {
        validate();
    }

    void validate() const {
        if (n <= 0 || (n & (n - 1)) != 0)
            throw ConfigError("grid: n_points must be a positive power of two");
        if (!(x_min < x_max))
            throw ConfigError("grid: x_min must be below x_max");
        if (!(kbar > 0.0))
            throw ConfigError("grid: kbar must be positive");
    }

    double length() const { return x_max - x_min; }
    double dx() const { return length() / n; }
    double x(int i) const { return x_min + dx() * i; }

    // FFT-ordered momentum of bin j
    double momentum(int j) const {
        const int k = j < n / 2 ? j : j - n;
        return kbar * 2.0 * PI / length() * k;
    }

    std::vector<double> momenta() const {
        std::vector<double> p(n);
        for (int j = 0; j < n; ++j) p[j] = momentum(j);
        return p;
    }

    // largest magnitude the grid can represent without aliasing
    double max_momentum() const { return kbar * PI * n / length(); }

    bool operator==(const Grid&) const = default;
};

} // namespace paulloc
