#include "paulloc/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "paulloc/fft.hpp"

namespace paulloc {

double norm(const WaveState& state) {
    double s = 0;
    for (const auto& c : state.psi) s += std::norm(c);
    return std::sqrt(s * state.grid.dx());
}

double boundary_mass(const WaveState& state) {
    const int n = state.grid.n;
    const int edge = std::max(1, static_cast<int>(n * GUARD_BAND / 2));
    double s = 0;
    for (int i = 0; i < edge; ++i)
        s += std::norm(state.psi[i]) + std::norm(state.psi[n - 1 - i]);
    return s * state.grid.dx();
}

double momentum_tail_mass(const WaveState& state) {
    const Grid& g = state.grid;
    std::vector<std::complex<double>> ft = state.psi;
    Fft fft(g.n);
    fft.forward(ft.data());
    const double edge = (1.0 - GUARD_BAND) * g.max_momentum();
    double tail = 0, total = 0;
    for (int j = 0; j < g.n; ++j) {
        const double m = std::norm(ft[j]);
        total += m;
        if (std::abs(g.momentum(j)) >= edge) tail += m;
    }
    return tail / total;
}

WaveState gaussian_packet(const Grid& grid, double x0, double p0, double sigma_x2) {
    grid.validate();
    if (!(sigma_x2 > 0.0)) throw ConfigError("gaussian_packet: sigma_x^2 must be positive");
    if (std::sqrt(sigma_x2) > grid.length() / 8.0)
        throw ConfigError("gaussian_packet: packet wider than an eighth of the grid");

    WaveState st;
    st.grid = grid;
    st.psi.resize(grid.n);
    const double inv_k = 1.0 / grid.kbar;
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        const double u = x - x0;
        st.psi[i] = std::polar(std::exp(-u * u / (4.0 * sigma_x2)), p0 * x * inv_k);
    }
    const double nrm = norm(st);
    for (auto& c : st.psi) c /= nrm;
    return st;
}

namespace {

// cached per-step phase tables; rebuilt only when grid/cfg/dt change
struct StepTables {
    Grid grid;
    double dt = 0.0;
    double kbar = 0.0;
    std::vector<std::complex<double>> kinetic_half;
    std::vector<double> p2; // |p_j|^2 in FFT order
    std::vector<char> tail; // guard band membership in FFT order
};

thread_local StepTables tables;

void refresh_tables(const Grid& grid, double dt) {
    if (tables.grid == grid && tables.dt == dt) return;
    tables.grid = grid;
    tables.dt = dt;
    tables.kinetic_half.resize(grid.n);
    tables.p2.resize(grid.n);
    tables.tail.resize(grid.n);
    const double pmax = grid.max_momentum();
    for (int j = 0; j < grid.n; ++j) {
        const double p = grid.momentum(j);
        tables.p2[j] = p * p;
        tables.kinetic_half[j] = std::polar(1.0, -p * p * (dt / 2.0) / (2.0 * grid.kbar));
        tables.tail[j] = std::abs(p) >= (1.0 - GUARD_BAND) * pmax ? 1 : 0;
    }
}

} // namespace

void split_step(WaveState& state, const TrapConfig& cfg, double dt, double tail_guard) {
    if (!(dt > 0.0)) throw ConfigError("split_step: dt must be positive");
    const Grid& g = state.grid;
    refresh_tables(g, dt);
    Fft fft(g.n);

    auto* psi = state.psi.data();
    fft.forward(psi);

    // aliasing guard on the momentum occupation
    double tail = 0, total = 0;
    for (int j = 0; j < g.n; ++j) {
        const double m = std::norm(psi[j]);
        total += m;
        if (tables.tail[j]) tail += m;
    }
    if (tail > tail_guard * total)
        throw GuardError("split_step: momentum-tail mass " + std::to_string(tail / total)
                         + " above guard at t=" + std::to_string(state.t));

    for (int j = 0; j < g.n; ++j) psi[j] *= tables.kinetic_half[j];
    fft.inverse(psi);

    const double tmid = state.t + dt / 2.0;
    const double trap = 0.5 * (cfg.a + 2.0 * cfg.q * std::cos(2.0 * tmid));
    const double scale = -dt / g.kbar;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        const double v = trap * x * x + cfg.coupling * std::cos(x + 2.0 * cfg.phase);
        psi[i] *= std::polar(1.0, scale * v);
    }

    fft.forward(psi);
    for (int j = 0; j < g.n; ++j) psi[j] *= tables.kinetic_half[j];
    fft.inverse(psi);

    state.t += dt;
}

QuantumMoments moments(const WaveState& state) {
    const Grid& g = state.grid;
    QuantumMoments m;

    double w = 0, sx = 0, sxx = 0;
    for (int i = 0; i < g.n; ++i) {
        const double d = std::norm(state.psi[i]);
        const double x = g.x(i);
        w += d;
        sx += d * x;
        sxx += d * x * x;
    }
    m.mean_x = sx / w;
    m.sd_x = std::sqrt(std::max(0.0, sxx / w - m.mean_x * m.mean_x));

    std::vector<std::complex<double>> ft = state.psi;
    Fft fft(g.n);
    fft.forward(ft.data());
    double wp = 0, sp = 0, spp = 0;
    for (int j = 0; j < g.n; ++j) {
        const double d = std::norm(ft[j]);
        const double p = g.momentum(j);
        wp += d;
        sp += d * p;
        spp += d * p * p;
    }
    m.mean_p = sp / wp;
    m.sd_p = std::sqrt(std::max(0.0, spp / wp - m.mean_p * m.mean_p));
    return m;
}

Distribution position_distribution(const WaveState& state) {
    const Grid& g = state.grid;
    Distribution d;
    d.spacing = g.dx();
    d.center.resize(g.n);
    d.density.resize(g.n);
    for (int i = 0; i < g.n; ++i) {
        d.center[i] = g.x(i);
        d.density[i] = std::norm(state.psi[i]);
    }
    d.normalize();
    return d;
}

Distribution momentum_distribution(const WaveState& state) {
    const Grid& g = state.grid;
    std::vector<std::complex<double>> ft = state.psi;
    Fft fft(g.n);
    fft.forward(ft.data());

    Distribution d;
    d.spacing = g.kbar * 2.0 * PI / g.length();
    d.center.resize(g.n);
    d.density.resize(g.n);
    // unfold FFT order onto an ascending momentum axis
    for (int j = 0; j < g.n; ++j) {
        const int k = j < g.n / 2 ? j + g.n / 2 : j - g.n / 2;
        d.center[k] = g.momentum(j);
        d.density[k] = std::norm(ft[j]);
    }
    d.normalize();
    return d;
}

Distribution window_average(const std::vector<Distribution>& snapshots) {
    return average_distributions(snapshots);
}

EvolveResult evolve(WaveState state, const TrapConfig& cfg, double t_final,
                    const EvolveOptions& opts) {
    if (!(t_final > state.t)) throw ConfigError("evolve: t_final must exceed current time");
    const auto steps_per_period = std::llround(PI / opts.dt);
    if (steps_per_period < 1 || opts.snapshots_per_period < 1
        || steps_per_period % opts.snapshots_per_period != 0)
        throw ConfigError("evolve: snapshots_per_period must divide steps per period");
    const long long stride = steps_per_period / opts.snapshots_per_period;
    const double dt = PI / static_cast<double>(steps_per_period);
    const auto n_steps = static_cast<long long>(std::llround((t_final - state.t) / dt));
    const bool window_active = opts.window_hi >= opts.window_lo;

    EvolveResult out;
    std::vector<double> acc_x, acc_p;
    Distribution mom_axis;

    auto observe = [&] {
        const QuantumMoments m = moments(state);
        out.moments.push(state.t, m.mean_x, m.mean_p, m.sd_x, m.sd_p);
        const double bm = boundary_mass(state);
        const double tm = momentum_tail_mass(state);
        out.max_boundary_mass = std::max(out.max_boundary_mass, bm);
        out.max_tail_mass = std::max(out.max_tail_mass, tm);
        if (bm > opts.guard_mass)
            throw GuardError("evolve: boundary mass " + std::to_string(bm)
                             + " above guard at t=" + std::to_string(state.t));
        if (window_active && state.t >= opts.window_lo && state.t <= opts.window_hi) {
            if (acc_x.empty()) {
                acc_x.assign(state.grid.n, 0.0);
                acc_p.assign(state.grid.n, 0.0);
            }
            const Distribution dx = position_distribution(state);
            const Distribution dp = momentum_distribution(state);
            for (int i = 0; i < state.grid.n; ++i) {
                acc_x[i] += dx.density[i];
                acc_p[i] += dp.density[i];
            }
            if (out.window_samples == 0) mom_axis = dp;
            ++out.window_samples;
        }
    };

    observe();
    for (long long s = 0; s < n_steps; ++s) {
        split_step(state, cfg, dt, opts.guard_mass);
        if ((s + 1) % stride == 0) observe();
    }

    if (out.window_samples > 0) {
        out.window_position.center.resize(state.grid.n);
        for (int i = 0; i < state.grid.n; ++i) out.window_position.center[i] = state.grid.x(i);
        out.window_position.density = acc_x;
        out.window_position.spacing = state.grid.dx();
        out.window_position.normalize();
        out.window_momentum.center = mom_axis.center;
        out.window_momentum.density = acc_p;
        out.window_momentum.spacing = mom_axis.spacing;
        out.window_momentum.normalize();
    }
    out.state = std::move(state);
    return out;
}

} // namespace paulloc
