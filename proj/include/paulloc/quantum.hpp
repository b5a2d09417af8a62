#pragma once

#include <complex>
#include <vector>

#include "paulloc/distribution.hpp"
#include "paulloc/grid.hpp"
#include "paulloc/model.hpp"
#include "paulloc/series.hpp"

namespace paulloc {

struct WaveState {
    Grid grid;
    std::vector<std::complex<double>> psi;
    double t = 0.0;
};

// fraction of the position/momentum range counted as "edge" by the guards
inline constexpr double GUARD_BAND = 0.05;
// mass allowed in the guard bands during valid runs
inline constexpr double GUARD_MASS = 1e-6;

double norm(const WaveState& state);
// probability mass within GUARD_BAND/2 of each grid edge
double boundary_mass(const WaveState& state);
// fraction of momentum occupation with |p| in the outer GUARD_BAND of the range
double momentum_tail_mass(const WaveState& state);

// Minimum-uncertainty packet exp(-(x-x0)^2/(4 sigma_x2) + i p0 x / kbar),
// normalized on the grid; implied momentum variance kbar^2/(4 sigma_x2).
WaveState gaussian_packet(const Grid& grid, double x0, double p0, double sigma_x2);

// One Strang step: half kinetic phase in momentum space, full potential phase
// at the window-midpoint time, half kinetic phase; advances t by dt.  Raises
// GuardError when momentum mass aliasing into the outer GUARD_BAND of the
// momentum range exceeds tail_guard.  The default is strict; long localized
// runs relax it because the saturated momentum tail legitimately carries
// ~4e-5 of the mass near the grid edge.
void split_step(WaveState& state, const TrapConfig& cfg, double dt,
                double tail_guard = GUARD_MASS);

struct QuantumMoments {
    double mean_x = 0.0, mean_p = 0.0;
    double sd_x = 0.0, sd_p = 0.0;
};

QuantumMoments moments(const WaveState& state);

Distribution position_distribution(const WaveState& state);
Distribution momentum_distribution(const WaveState& state); // ascending p axis

// Arithmetic mean of snapshot distributions, renormalized.
Distribution window_average(const std::vector<Distribution>& snapshots);

struct EvolveOptions {
    double dt = PI / 512;
    int snapshots_per_period = 8;
    double window_lo = 0.0, window_hi = -1.0; // distribution window, inactive when hi < lo
    double guard_mass = GUARD_MASS;           // boundary + momentum-tail abort level
};

struct EvolveResult {
    MomentsSeries moments;           // at snapshot cadence, including t0
    Distribution window_position;    // grid-resolution window averages
    Distribution window_momentum;
    int window_samples = 0;
    WaveState state;                 // final state
    double max_boundary_mass = 0.0;  // guard maxima seen at snapshot cadence
    double max_tail_mass = 0.0;
};

// Repeated split stepping with moment recording; checks the boundary-mass
// guard at every snapshot.  The window distributions average |psi|^2 over the
// snapshots falling inside [window_lo, window_hi].
EvolveResult evolve(WaveState state, const TrapConfig& cfg, double t_final,
                    const EvolveOptions& opts);

} // namespace paulloc
