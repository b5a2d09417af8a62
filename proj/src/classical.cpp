#include "paulloc/classical.hpp"

#include <algorithm>
#include <cmath>

#include "paulloc/pool.hpp"
#include "paulloc/rng.hpp"

namespace paulloc {

PhasePoint step(const PhasePoint& pt, const TrapConfig& cfg, double t, double dt) {
    const double p_half = pt.p + 0.5 * dt * force(cfg, pt.x, t);
    const double x_new = pt.x + dt * p_half;
    const double p_new = p_half + 0.5 * dt * force(cfg, x_new, t + dt);
    return {x_new, p_new};
}

Trajectory propagate(PhasePoint start, const TrapConfig& cfg, double t0, double t1,
                     double dt, const std::vector<double>& sample_times) {
    if (!(dt > 0.0)) throw ConfigError("propagate: dt must be positive");
    if (!(t1 > t0)) throw ConfigError("propagate: t1 must exceed t0");
    const auto n_steps = static_cast<long long>(std::llround((t1 - t0) / dt));

    // map each requested time to its nearest step index
    std::vector<long long> want(sample_times.size());
    for (std::size_t i = 0; i < sample_times.size(); ++i)
        want[i] = std::clamp<long long>(std::llround((sample_times[i] - t0) / dt), 0, n_steps);

    Trajectory out;
    PhasePoint pt = start;
    for (long long s = 0; s <= n_steps; ++s) {
        const double t = t0 + s * dt;
        for (std::size_t i = 0; i < want.size(); ++i)
            if (want[i] == s) out.samples.push_back({t, pt});
        if (s == n_steps) break;
        pt = step(pt, cfg, t, dt);
        if (escaped(pt)) {
            out.diverged = true;
            out.diverged_at = t + dt;
            break;
        }
    }
    return out;
}

Section poincare_section(const TrapConfig& cfg, const std::vector<PhasePoint>& seeds,
                         int n_periods, double dt) {
    if (n_periods < 0) throw ConfigError("poincare_section: negative period count");
    const auto steps_per_period = std::max<long long>(1, std::llround(PI / dt));
    const double h = PI / static_cast<double>(steps_per_period);

    Section sec;
    sec.points.resize(seeds.size());
    sec.diverged_at_period.assign(seeds.size(), -1);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
        PhasePoint pt = seeds[s];
        sec.points[s].push_back(pt);
        for (int n = 1; n <= n_periods; ++n) {
            bool died = false;
            for (long long k = 0; k < steps_per_period; ++k) {
                pt = step(pt, cfg, (n - 1) * PI + k * h, h);
                if (escaped(pt)) {
                    died = true;
                    break;
                }
            }
            if (died) {
                sec.diverged_at_period[s] = n;
                break;
            }
            sec.points[s].push_back(pt);
        }
    }
    return sec;
}

std::vector<PhasePoint> sample_gaussian_ensemble(const EnsembleSpec& spec) {
    if (spec.count < 1) throw ConfigError("ensemble: count must be at least 1");
    if (spec.sigma_x < 0.0 || spec.sigma_p < 0.0)
        throw ConfigError("ensemble: widths must be non-negative");
    std::vector<PhasePoint> pts(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        GaussianStream g(spec.seed, static_cast<std::uint64_t>(i));
        const auto [z0, z1] = g.normal_pair();
        pts[i] = {spec.center.x + spec.sigma_x * z0, spec.center.p + spec.sigma_p * z1};
    }
    return pts;
}

Moments ensemble_moments(const std::vector<PhasePoint>& ensemble) {
    const auto n = static_cast<double>(ensemble.size());
    if (ensemble.empty()) throw ConfigError("ensemble_moments: empty ensemble");
    double sx = 0, sp = 0, sxx = 0, spp = 0;
    for (const auto& pt : ensemble) {
        sx += pt.x;
        sp += pt.p;
        sxx += pt.x * pt.x;
        spp += pt.p * pt.p;
    }
    Moments m;
    m.mean_x = sx / n;
    m.mean_p = sp / n;
    if (ensemble.size() > 1) {
        m.sd_x = std::sqrt(std::max(0.0, (sxx - sx * sx / n) / (n - 1)));
        m.sd_p = std::sqrt(std::max(0.0, (spp - sp * sp / n) / (n - 1)));
    }
    return m;
}

Distribution time_averaged_histogram(const std::vector<double>& window_samples,
                                     int bins, double lo, double hi) {
    if (window_samples.empty())
        throw ConfigError("time_averaged_histogram: empty sample window");
    return histogram_distribution(window_samples, bins, lo, hi);
}

namespace {

constexpr int CHUNK = 64; // trajectories per reduction unit, fixed for determinism

struct ChunkResult {
    std::vector<double> sum_x, sum_x2, sum_p, sum_p2;
    std::vector<std::int64_t> x_counts, p_counts;
    int diverged = 0;
    double max_abs_x = 0.0, max_abs_p = 0.0;
};

} // namespace

EnsembleRunResult propagate_ensemble(const std::vector<PhasePoint>& initial,
                                     const TrapConfig& cfg,
                                     const EnsembleRunParams& params) {
    const int n_traj = static_cast<int>(initial.size());
    if (n_traj < 1) throw ConfigError("propagate_ensemble: empty ensemble");
    if (!(params.dt > 0.0)) throw ConfigError("propagate_ensemble: dt must be positive");

    const auto steps_per_period = std::llround(PI / params.dt);
    if (steps_per_period < 1 || params.snapshots_per_period < 1
        || steps_per_period % params.snapshots_per_period != 0)
        throw ConfigError("propagate_ensemble: snapshots_per_period must divide steps per period");
    const long long stride = steps_per_period / params.snapshots_per_period;
    const double dt = PI / static_cast<double>(steps_per_period);
    const auto n_steps = static_cast<long long>(std::llround(params.t_final / dt));
    const auto n_samples = static_cast<std::size_t>(n_steps / stride + 1);
    const bool window_active = params.window_hi >= params.window_lo;

    const int n_chunks = (n_traj + CHUNK - 1) / CHUNK;
    std::vector<ChunkResult> results(n_chunks);

    auto run_chunk = [&](int c) {
        ChunkResult& r = results[c];
        r.sum_x.assign(n_samples, 0.0);
        r.sum_x2.assign(n_samples, 0.0);
        r.sum_p.assign(n_samples, 0.0);
        r.sum_p2.assign(n_samples, 0.0);
        r.x_counts.assign(params.hist_bins, 0);
        r.p_counts.assign(params.hist_bins, 0);

        const int begin = c * CHUNK;
        const int end = std::min(n_traj, begin + CHUNK);
        const int m = end - begin;
        std::vector<double> x(m), p(m), f(m);
        std::vector<char> frozen(m, 0);
        for (int i = 0; i < m; ++i) {
            x[i] = initial[begin + i].x;
            p[i] = initial[begin + i].p;
            f[i] = force(cfg, x[i], 0.0);
        }
        const double xw = params.hist_x_range, pw = params.hist_p_range;
        const double xscale = params.hist_bins / (2.0 * xw);
        const double pscale = params.hist_bins / (2.0 * pw);

        auto record = [&](std::size_t sample_idx, double t) {
            for (int i = 0; i < m; ++i) {
                r.sum_x[sample_idx] += x[i];
                r.sum_x2[sample_idx] += x[i] * x[i];
                r.sum_p[sample_idx] += p[i];
                r.sum_p2[sample_idx] += p[i] * p[i];
                r.max_abs_x = std::max(r.max_abs_x, std::abs(x[i]));
                r.max_abs_p = std::max(r.max_abs_p, std::abs(p[i]));
            }
            if (window_active && t >= params.window_lo && t <= params.window_hi) {
                for (int i = 0; i < m; ++i) {
                    if (x[i] >= -xw && x[i] < xw) {
                        auto b = static_cast<int>((x[i] + xw) * xscale);
                        ++r.x_counts[std::min(b, params.hist_bins - 1)];
                    }
                    if (p[i] >= -pw && p[i] < pw) {
                        auto b = static_cast<int>((p[i] + pw) * pscale);
                        ++r.p_counts[std::min(b, params.hist_bins - 1)];
                    }
                }
            }
        };

        record(0, 0.0);
        for (long long s = 0; s < n_steps; ++s) {
            const double t = s * dt;
            for (int i = 0; i < m; ++i) {
                if (frozen[i]) continue;
                const double ph = p[i] + 0.5 * dt * f[i];
                x[i] += dt * ph;
                f[i] = force(cfg, x[i], t + dt);
                p[i] = ph + 0.5 * dt * f[i];
                if (!(std::abs(x[i]) <= ESCAPE_RADIUS && std::abs(p[i]) <= ESCAPE_RADIUS)) {
                    frozen[i] = 1;
                    ++r.diverged;
                }
            }
            if ((s + 1) % stride == 0) record(static_cast<std::size_t>((s + 1) / stride), (s + 1) * dt);
        }
    };

    parallel_items(n_chunks, params.workers, run_chunk);

    // combine partial reductions in fixed chunk order
    EnsembleRunResult out;
    std::vector<double> sx(n_samples, 0.0), sx2(n_samples, 0.0), sp(n_samples, 0.0), sp2(n_samples, 0.0);
    out.x_counts.assign(params.hist_bins, 0);
    out.p_counts.assign(params.hist_bins, 0);
    for (const ChunkResult& r : results) {
        for (std::size_t k = 0; k < n_samples; ++k) {
            sx[k] += r.sum_x[k];
            sx2[k] += r.sum_x2[k];
            sp[k] += r.sum_p[k];
            sp2[k] += r.sum_p2[k];
        }
        for (int b = 0; b < params.hist_bins; ++b) {
            out.x_counts[b] += r.x_counts[b];
            out.p_counts[b] += r.p_counts[b];
        }
        out.diverged += r.diverged;
        out.max_abs_x = std::max(out.max_abs_x, r.max_abs_x);
        out.max_abs_p = std::max(out.max_abs_p, r.max_abs_p);
    }
    const double n = n_traj;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double mx = sx[k] / n;
        const double mp = sp[k] / n;
        const double vx = n > 1 ? std::max(0.0, (sx2[k] - sx[k] * sx[k] / n) / (n - 1)) : 0.0;
        const double vp = n > 1 ? std::max(0.0, (sp2[k] - sp[k] * sp[k] / n) / (n - 1)) : 0.0;
        out.moments.push(static_cast<double>(k) * stride * dt, mx, mp, std::sqrt(vx), std::sqrt(vp));
    }
    return out;
}

} // namespace paulloc
