#include "paulloc/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "paulloc/classical.hpp"
#include "paulloc/csv.hpp"
#include "paulloc/floquet.hpp"
#include "paulloc/quantum.hpp"
#include "paulloc/rng.hpp"
#include "paulloc/version.hpp"

namespace paulloc {

namespace {

namespace fs = std::filesystem;

constexpr int MODE_DISTRIBUTIONS = 8; // top-weight states written out per floquet run

fs::path data_path(const RunConfig& cfg, RunReport& rep, const std::string& name) {
    rep.files.push_back(name);
    return fs::path(cfg.out_dir) / name;
}

void write_moments_csv(const fs::path& path, const MomentsSeries& s,
                       const std::vector<std::string>& comments) {
    CsvWriter w(path.string());
    for (const auto& c : comments) w.comment(c);
    w.header({"t", "mean_x", "mean_p", "sd_x", "sd_p"});
    for (size_t i = 0; i < s.t.size(); ++i)
        w.row({s.t[i], s.mean_x[i], s.mean_p[i], s.sd_x[i], s.sd_p[i]});
    w.close();
}

void write_window_csv(const fs::path& path, const Distribution& classical,
                      const Distribution& quantum, const std::string& axis,
                      const std::vector<std::string>& comments) {
    CsvWriter w(path.string());
    for (const auto& c : comments) w.comment(c);
    w.header({axis, "classical_density", "quantum_density"});
    for (size_t i = 0; i < classical.center.size(); ++i)
        w.row({classical.center[i], classical.density[i], quantum.density[i]});
    w.close();
}

std::string fmt(double v) { return format_exact(v); }

void run_poincare(const RunConfig& cfg, RunReport& rep) {
    const MathieuResult mr = mathieu_exponent(cfg.trap.a, cfg.trap.q);
    if (!mr.stable)
        rep.notes.push_back("trap (a=" + fmt(cfg.trap.a) + ", q=" + fmt(cfg.trap.q)
                            + ") is linearly unstable: |x| grows by e^" + fmt(mr.growth)
                            + " per period");

    std::vector<PhasePoint> seeds = cfg.seeds;
    for (int i = 0; i < cfg.random_count; ++i) {
        GaussianStream gs(cfg.seed, (1u << 20) + static_cast<std::uint64_t>(i));
        seeds.push_back({(2.0 * gs.uniform() - 1.0) * cfg.random_x_range,
                         (2.0 * gs.uniform() - 1.0) * cfg.random_p_range});
    }

    const int n_periods = static_cast<int>(std::llround(cfg.periods));
    const Section sec =
        poincare_section(cfg.trap, seeds, n_periods, PI / cfg.steps_per_period);

    CsvWriter w(data_path(cfg, rep, "sections.csv").string());
    w.comment("stroboscopic map samples at t = n*pi");
    w.header({"seed", "period", "x", "p"});
    int escaped_count = 0;
    for (size_t s = 0; s < sec.points.size(); ++s) {
        for (size_t n = 0; n < sec.points[s].size(); ++n)
            w.row({static_cast<double>(s), static_cast<double>(n), sec.points[s][n].x,
                   sec.points[s][n].p});
        if (sec.diverged_at_period[s] >= 0) ++escaped_count;
    }
    w.close();
    if (escaped_count > 0)
        rep.notes.push_back(std::to_string(escaped_count) + " of "
                            + std::to_string(seeds.size())
                            + " seeds left the escape radius before the last period");
}

void run_evolve(const RunConfig& cfg, RunReport& rep) {
    const double t_final = cfg.periods * PI;
    const double win_lo = (cfg.window_center - 0.5 * cfg.window_width) * PI;
    const double win_hi = (cfg.window_center + 0.5 * cfg.window_width) * PI;
    const double dt = PI / cfg.steps_per_period;

    EnsembleSpec espec;
    espec.count = cfg.ensemble_count;
    espec.center = {cfg.center_x, cfg.center_p};
    espec.sigma_x = std::sqrt(cfg.sigma_x2);
    espec.sigma_p = std::sqrt(cfg.sigma_p2);
    espec.seed = cfg.seed;

    EnsembleRunParams ep;
    ep.t_final = t_final;
    ep.dt = dt;
    ep.snapshots_per_period = cfg.snapshots_per_period;
    ep.window_lo = win_lo;
    ep.window_hi = win_hi;
    ep.hist_bins = cfg.hist_bins;
    ep.hist_x_range = cfg.hist_x_range;
    ep.hist_p_range = cfg.hist_p_range;
    ep.workers = cfg.workers;
    const EnsembleRunResult cl = propagate_ensemble(sample_gaussian_ensemble(espec),
                                                    cfg.trap, ep);

    EvolveOptions qo;
    qo.dt = dt;
    qo.snapshots_per_period = cfg.snapshots_per_period;
    qo.window_lo = win_lo;
    qo.window_hi = win_hi;
    qo.guard_mass = cfg.guard_mass;
    const EvolveResult qu =
        evolve(gaussian_packet(cfg.grid, cfg.center_x, cfg.center_p, cfg.sigma_x2),
               cfg.trap, t_final, qo);

    const std::vector<std::string> meta = {
        "ensemble of " + std::to_string(cfg.ensemble_count) + " trajectories vs one packet",
        "snapshot cadence " + std::to_string(cfg.snapshots_per_period) + " per period"};
    write_moments_csv(data_path(cfg, rep, "classical_spreads.csv"), cl.moments, meta);
    write_moments_csv(data_path(cfg, rep, "quantum_spreads.csv"), qu.moments, meta);
    write_moments_csv(data_path(cfg, rep, "classical_cycle.csv"), cycle_average(cl.moments),
                      {"sliding one-period averages"});
    write_moments_csv(data_path(cfg, rep, "quantum_cycle.csv"), cycle_average(qu.moments),
                      {"sliding one-period averages"});

    if (qu.window_samples > 0) {
        const std::string wmeta = "time average over t in [" + fmt(win_lo) + ", "
                                  + fmt(win_hi) + "], " + std::to_string(qu.window_samples)
                                  + " quantum snapshots";
        const Distribution clx =
            counts_to_distribution(cl.x_counts, -cfg.hist_x_range, cfg.hist_x_range);
        const Distribution qux =
            rebin_density(qu.window_position.center, qu.window_position.density,
                          qu.window_position.spacing, cfg.hist_bins, -cfg.hist_x_range,
                          cfg.hist_x_range);
        write_window_csv(data_path(cfg, rep, "window_position.csv"), clx, qux, "x", {wmeta});

        const Distribution clp =
            counts_to_distribution(cl.p_counts, -cfg.hist_p_range, cfg.hist_p_range);
        const Distribution qup =
            rebin_density(qu.window_momentum.center, qu.window_momentum.density,
                          qu.window_momentum.spacing, cfg.hist_bins, -cfg.hist_p_range,
                          cfg.hist_p_range);
        write_window_csv(data_path(cfg, rep, "window_momentum.csv"), clp, qup, "p", {wmeta});
    } else {
        rep.notes.push_back("no snapshots fell inside the averaging window");
    }

    if (cl.diverged > 0)
        rep.notes.push_back(std::to_string(cl.diverged) + " of "
                            + std::to_string(cfg.ensemble_count)
                            + " trajectories frozen at the escape radius");
    rep.notes.push_back("classical extremes: max|x| = " + fmt(cl.max_abs_x)
                        + ", max|p| = " + fmt(cl.max_abs_p));
    rep.notes.push_back("quantum guard maxima: boundary mass " + fmt(qu.max_boundary_mass)
                        + ", momentum-tail mass " + fmt(qu.max_tail_mass)
                        + " (abort level " + fmt(cfg.guard_mass) + ")");
}

void write_states_rows(CsvWriter& w, const FloquetSet& set, double omega,
                       const std::vector<double>* weights) {
    for (int k = 0; k < set.size; ++k) {
        std::vector<double> row = {omega,
                                   static_cast<double>(k),
                                   set.mu[k],
                                   static_cast<double>(set.parity[k]),
                                   set.energy[k],
                                   set.island_weight[k],
                                   set.residual[k],
                                   static_cast<double>(set.unresolved[k])};
        if (weights) row.push_back((*weights)[k]);
        w.row(row);
    }
}

void run_floquet(const RunConfig& cfg, RunReport& rep) {
    const ReferenceBasis basis =
        build_reference_basis(cfg.grid, cfg.basis_frequency, cfg.basis_size);
    const MonodromyOperator op =
        build_monodromy(cfg.trap, basis, PI / cfg.monodromy_steps, PI, cfg.workers);
    const FloquetSet set = floquet_spectrum(op, basis);
    const ExpansionReport ex = expansion_coefficients(
        gaussian_packet(cfg.grid, cfg.center_x, cfg.center_p, cfg.sigma_x2), set, basis);

    CsvWriter w(data_path(cfg, rep, "quasienergies.csv").string());
    w.comment("one-period spectrum in a reference-oscillator basis, states in energy order");
    w.comment("nu = " + fmt(set.nu) + ", M = " + std::to_string(set.size)
              + ", unitarity defect = " + fmt(op.defect) + " (lowest "
              + std::to_string(op.trusted) + " columns), " + fmt(op.defect_all)
              + " (all)");
    w.comment("packet expansion completeness = " + fmt(ex.completeness));
    w.header({"state", "mu", "parity", "energy", "island_weight", "residual", "unresolved",
              "weight"});
    for (int k = 0; k < set.size; ++k)
        w.row({static_cast<double>(k), set.mu[k], static_cast<double>(set.parity[k]),
               set.energy[k], set.island_weight[k], set.residual[k],
               static_cast<double>(set.unresolved[k]), ex.weights[k]});
    w.close();

    CsvWriter md(data_path(cfg, rep, "mode_distributions.csv").string());
    md.comment("position densities of the " + std::to_string(MODE_DISTRIBUTIONS)
               + " largest-weight states");
    md.header({"state", "x", "density"});
    const int top = std::min<int>(MODE_DISTRIBUTIONS, set.size);
    for (int r = 0; r < top; ++r) {
        const int k = ex.by_weight[r];
        const Distribution d = floquet_position_distribution(set, basis, k);
        for (size_t i = 0; i < d.center.size(); ++i)
            md.row({static_cast<double>(k), d.center[i], d.density[i]});
    }
    md.close();

    const int n_unresolved =
        static_cast<int>(std::count(set.unresolved.begin(), set.unresolved.end(), char(1)));
    if (n_unresolved > 0)
        rep.notes.push_back(std::to_string(n_unresolved)
                            + " states exceed the residual threshold (basis truncation)");
    if (ex.low_completeness)
        rep.notes.push_back("expansion completeness " + fmt(ex.completeness)
                            + " below 0.95: basis too small for this packet");
    double top4 = 0.0;
    for (int r = 0; r < std::min<int>(4, set.size); ++r) top4 += ex.weights[ex.by_weight[r]];
    rep.notes.push_back("largest weight " + fmt(ex.weights[ex.by_weight[0]]) + " on state "
                        + std::to_string(ex.by_weight[0]) + ", four largest sum to "
                        + fmt(top4));
}

void run_sweep(const RunConfig& cfg, RunReport& rep) {
    const auto n_steps =
        static_cast<int>(std::floor((cfg.sweep_max - cfg.sweep_min) / cfg.sweep_step + 1e-9));
    std::vector<double> omegas(n_steps + 1);
    for (int i = 0; i <= n_steps; ++i) omegas[i] = cfg.sweep_min + i * cfg.sweep_step;

    const ReferenceBasis basis =
        build_reference_basis(cfg.grid, cfg.basis_frequency, cfg.basis_size);
    SweepOptions so;
    so.dt = PI / cfg.monodromy_steps;
    so.workers = cfg.workers;
    const SweepResult sr = sweep_quasienergies(cfg.trap, omegas, basis, so);

    CsvWriter ds(data_path(cfg, rep, "sweep_doublet.csv").string());
    ds.comment("lowest even/odd pair tracked through the coupling sweep");
    ds.comment("flagged points carry the extrapolated value (no trustworthy candidate)");
    ds.header({"omega", "mu_even", "mu_odd", "splitting", "flag_even", "flag_odd",
               "index_even", "index_odd", "overlap_even", "overlap_odd"});
    const DoubletTrack& d = sr.doublet;
    for (size_t i = 0; i < sr.omegas.size(); ++i)
        ds.row({sr.omegas[i], d.mu_even[i], d.mu_odd[i], d.splitting[i],
                static_cast<double>(d.flag_even[i]), static_cast<double>(d.flag_odd[i]),
                static_cast<double>(d.index_even[i]), static_cast<double>(d.index_odd[i]),
                d.overlap_even[i], d.overlap_odd[i]});
    ds.close();

    CsvWriter st(data_path(cfg, rep, "sweep_states.csv").string());
    st.comment("full spectrum per coupling, states in energy order");
    st.header({"omega", "state", "mu", "parity", "energy", "island_weight", "residual",
               "unresolved"});
    for (size_t i = 0; i < sr.omegas.size(); ++i)
        write_states_rows(st, sr.points[i], sr.omegas[i], nullptr);
    st.close();

    for (const auto& warning : sr.warnings) rep.notes.push_back(warning);
}

void run_plan(const RunConfig& cfg, RunReport& rep) {
    const Reduction red = reduce_to_dimensionless(physical_setup(cfg));
    const MathieuResult mr = mathieu_exponent(red.cfg.a, red.cfg.q);
    Grid g = cfg.grid;
    g.kbar = red.cfg.kbar;

    std::ostringstream t;
    t << "scaled parameters for the configured ion and laser\n";
    t << "  effective Planck constant kbar = " << fmt(red.cfg.kbar) << "\n";
    t << "  standing-wave depth   coupling = " << fmt(red.cfg.coupling) << "\n";
    t << "  saturation parameter  rabi/detuning = " << fmt(red.epsilon) << "\n";
    if (red.far_detuning_warning) {
        t << "  WARNING: |rabi/detuning| > " << fmt(EPSILON_WARN)
          << "; adiabatic elimination of the internal state is marginal\n";
        rep.notes.push_back("saturation parameter " + fmt(red.epsilon)
                            + " beyond the far-detuning regime");
    }
    t << "trap stability (a = " << fmt(red.cfg.a) << ", q = " << fmt(red.cfg.q) << ")\n";
    if (mr.stable) {
        t << "  stable; characteristic exponent = " << fmt(mr.exponent) << "\n";
        t << "  secular frequency = " << fmt(mr.exponent * cfg.rf_frequency_hz / 2.0)
          << " Hz\n";
    } else {
        t << "  UNSTABLE; |x| grows by e^" << fmt(mr.growth) << " per drive period\n";
        rep.notes.push_back("configured trap voltages are linearly unstable");
    }
    t << "grid " << g.n << " points on [" << fmt(g.x_min) << ", " << fmt(g.x_max)
      << "]: resolves |p| up to " << fmt(g.max_momentum()) << "\n";
    t << "config block for the scaled runs:\n";
    t << "  [trap]\n";
    t << "  a = " << fmt(red.cfg.a) << "\n";
    t << "  q = " << fmt(red.cfg.q) << "\n";
    t << "  coupling = " << fmt(red.cfg.coupling) << "\n";
    t << "  phase = " << fmt(red.cfg.phase) << "\n";
    t << "  kbar = " << fmt(red.cfg.kbar) << "\n";
    rep.plan_text = t.str();

    std::ofstream out(data_path(cfg, rep, "plan.txt"));
    out << rep.plan_text;
    if (!out) throw GuardError("plan: cannot write report");
}

} // namespace

RunReport run_experiment(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    fs::create_directories(cfg.out_dir);

    RunReport rep;
    if (cfg.kind == "poincare")
        run_poincare(cfg, rep);
    else if (cfg.kind == "evolve")
        run_evolve(cfg, rep);
    else if (cfg.kind == "floquet")
        run_floquet(cfg, rep);
    else if (cfg.kind == "sweep")
        run_sweep(cfg, rep);
    else if (cfg.kind == "plan")
        run_plan(cfg, rep);
    else
        throw ConfigError("unknown experiment kind '" + cfg.kind + "'");

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream mf(fs::path(cfg.out_dir) / "manifest.conf");
    mf << "# tool version " << VERSION << "\n";
    mf << "# kind " << cfg.kind << ", wall seconds " << format_exact(wall) << "\n";
    for (const auto& f : rep.files) mf << "# file " << f << "\n";
    for (const auto& n : rep.notes) mf << "# note " << n << "\n";
    mf << "\n" << emit_config(cfg);
    if (!mf) throw GuardError("cannot write manifest in '" + cfg.out_dir + "'");
    return rep;
}

} // namespace paulloc
