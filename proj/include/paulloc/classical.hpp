#pragma once

#include <cstdint>
#include <vector>

#include "paulloc/distribution.hpp"
#include "paulloc/model.hpp"
#include "paulloc/series.hpp"

namespace paulloc {

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;

    bool operator==(const PhasePoint&) const = default;
};

inline constexpr double ESCAPE_RADIUS = 200.0;

inline bool escaped(const PhasePoint& pt) {
    return !(std::abs(pt.x) <= ESCAPE_RADIUS && std::abs(pt.p) <= ESCAPE_RADIUS);
}

// One velocity-Verlet (kick-drift-kick) step of Newton's equations in the
// time-dependent potential; symplectic, time-reversible.
PhasePoint step(const PhasePoint& pt, const TrapConfig& cfg, double t, double dt);

struct TrajectorySample {
    double t = 0.0;
    PhasePoint pt{};
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool diverged = false;
    double diverged_at = 0.0;
};

// Repeated stepping from t0 to t1; emits a sample at the step closest to each
// requested time.  Stops early (flagging divergence) once the point escapes.
Trajectory propagate(PhasePoint start, const TrapConfig& cfg, double t0, double t1,
                     double dt, const std::vector<double>& sample_times);

struct Section {
    // strobe points at t = n*pi, n = 0..n_periods inclusive, one row per seed
    std::vector<std::vector<PhasePoint>> points;
    std::vector<int> diverged_at_period; // -1 when the full section completed
};

Section poincare_section(const TrapConfig& cfg, const std::vector<PhasePoint>& seeds,
                         int n_periods, double dt = PI / 512);

struct EnsembleSpec {
    int count = 4096;
    PhasePoint center{};
    double sigma_x = 0.0;
    double sigma_p = 0.0;
    std::uint64_t seed = 1;
};

// Independent normal draws in x and p; identical seed gives the identical
// ensemble regardless of how the work is scheduled afterwards.
std::vector<PhasePoint> sample_gaussian_ensemble(const EnsembleSpec& spec);

struct Moments {
    double mean_x = 0.0, mean_p = 0.0;
    double sd_x = 0.0, sd_p = 0.0; // unbiased
};

Moments ensemble_moments(const std::vector<PhasePoint>& ensemble);

Distribution time_averaged_histogram(const std::vector<double>& window_samples,
                                     int bins, double lo, double hi);

// Ensemble propagation with moment recording and window histograms, used by
// the run orchestration.  Trajectories advance in fixed-size chunks whose
// partial reductions are combined in chunk order, so the result is identical
// for any worker count.
struct EnsembleRunParams {
    double t_final = 0.0;
    double dt = PI / 512;
    int snapshots_per_period = 8;
    double window_lo = 0.0, window_hi = -1.0; // histogram window, inactive when hi < lo
    int hist_bins = 200;
    double hist_x_range = 30.0;
    double hist_p_range = 25.0;
    int workers = 1;
};

struct EnsembleRunResult {
    MomentsSeries moments;
    std::vector<std::int64_t> x_counts, p_counts;
    int diverged = 0;       // trajectories frozen at the escape radius
    double max_abs_x = 0.0; // diagnostics
    double max_abs_p = 0.0;
};

EnsembleRunResult propagate_ensemble(const std::vector<PhasePoint>& initial,
                                     const TrapConfig& cfg,
                                     const EnsembleRunParams& params);

} // namespace paulloc
