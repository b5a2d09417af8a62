#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "paulloc/common.hpp"

namespace paulloc {

// splitmix64 finalizer; used to derive independent per-stream seeds from a
// single master seed so that results do not depend on work scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master + (stream + 1) * 0x9e3779b97f4a7c15ULL);
}

// Deterministic per-stream generator.  Gaussians come from an explicit
// Box-Muller transform: std::normal_distribution's algorithm is
// implementation-defined, which would break bit-reproducibility across
// standard libraries.
class GaussianStream {
public:
    GaussianStream(std::uint64_t master, std::uint64_t stream)
        : gen_(stream_seed(master, stream)) {}

    double uniform() { // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    std::pair<double, double> normal_pair() {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * PI * u2), r * std::sin(2.0 * PI * u2)};
    }

private:
    std::mt19937_64 gen_;
};

} // namespace paulloc
