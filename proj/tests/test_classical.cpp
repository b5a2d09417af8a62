#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "paulloc/classical.hpp"
#include "paulloc/model.hpp"
#include "paulloc/series.hpp"

using namespace paulloc;

namespace {

PhasePoint advance(PhasePoint pt, const TrapConfig& cfg, double t0, int n, double dt) {
    for (int s = 0; s < n; ++s) pt = step(pt, cfg, t0 + s * dt, dt);
    return pt;
}

} // namespace

TEST_CASE("one step is algebraically reversible") {
    TrapConfig cfg; // a=0, q=0.4, coupling=0.65
    const PhasePoint start{0.7, -0.3};
    const double dt = PI / 512;
    PhasePoint pt = start;
    for (int s = 0; s < 64; ++s) pt = step(pt, cfg, s * dt, dt);
    for (int s = 63; s >= 0; --s) pt = step(pt, cfg, (s + 1) * dt, -dt);
    CHECK(pt.x == doctest::Approx(start.x).epsilon(1e-12));
    CHECK(pt.p == doctest::Approx(start.p).epsilon(1e-12));
}

TEST_CASE("one-step Jacobian determinant is one") {
    TrapConfig cfg;
    const double dt = PI / 512;
    const double t = 0.37;
    const PhasePoint c{1.1, 0.4};
    const double h = 1e-6;
    const PhasePoint xp = step({c.x + h, c.p}, cfg, t, dt);
    const PhasePoint xm = step({c.x - h, c.p}, cfg, t, dt);
    const PhasePoint pp = step({c.x, c.p + h}, cfg, t, dt);
    const PhasePoint pm = step({c.x, c.p - h}, cfg, t, dt);
    const double dxdx = (xp.x - xm.x) / (2 * h);
    const double dpdx = (xp.p - xm.p) / (2 * h);
    const double dxdp = (pp.x - pm.x) / (2 * h);
    const double dpdp = (pp.p - pm.p) / (2 * h);
    CHECK(dxdx * dpdp - dxdp * dpdx == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("global error drops fourfold when the step is halved") {
    // static oscillator x'' = -x: exact solution available
    TrapConfig cfg;
    cfg.a = 1.0;
    cfg.q = 0.0;
    cfg.coupling = 0.0;
    const PhasePoint start{1.0, 0.0};
    const double T = 2.0;
    auto err = [&](int n) {
        const PhasePoint end = advance(start, cfg, 0.0, n, T / n);
        return std::hypot(end.x - std::cos(T), end.p + std::sin(T));
    };
    const double r1 = err(2000) / err(4000);
    const double r2 = err(4000) / err(8000);
    CHECK(r1 == doctest::Approx(4.0).epsilon(0.02));
    CHECK(r2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("coupling-free strobe map reproduces the linear-system monodromy") {
    TrapConfig cfg;
    cfg.coupling = 0.0; // a=0, q=0.4: linear equation of motion
    const MathieuResult mr = mathieu_exponent(cfg.a, cfg.q);
    const PhasePoint e1 = advance({1.0, 0.0}, cfg, 0.0, 512, PI / 512);
    const PhasePoint e2 = advance({0.0, 1.0}, cfg, 0.0, 512, PI / 512);
    // production step: second-order accurate
    CHECK(std::abs(e1.x - mr.monodromy[0]) < 1e-4);
    CHECK(std::abs(e2.x - mr.monodromy[1]) < 1e-4);
    CHECK(std::abs(e1.p - mr.monodromy[2]) < 1e-4);
    CHECK(std::abs(e2.p - mr.monodromy[3]) < 1e-4);
    // refined step: the map converges to the reference matrix
    const PhasePoint f1 = advance({1.0, 0.0}, cfg, 0.0, 4096, PI / 4096);
    const PhasePoint f2 = advance({0.0, 1.0}, cfg, 0.0, 4096, PI / 4096);
    CHECK(std::abs(f1.x - mr.monodromy[0]) < 1e-6);
    CHECK(std::abs(f2.x - mr.monodromy[1]) < 1e-6);
    CHECK(std::abs(f1.p - mr.monodromy[2]) < 1e-6);
    CHECK(std::abs(f2.p - mr.monodromy[3]) < 1e-6);
}

TEST_CASE("strobe orbits preserve the Mathieu ellipse invariant") {
    // For the stable linear map M there is a quadratic form S with M^T S M = S;
    // z^T S z is then conserved by the exact strobe map.  S = J (M - cos(mu pi) I) / sin.
    TrapConfig cfg;
    cfg.coupling = 0.0;
    const MathieuResult mr = mathieu_exponent(cfg.a, cfg.q);
    REQUIRE(mr.stable);
    const double c = std::cos(mr.exponent * PI);
    const double s = std::sin(mr.exponent * PI);
    const double m11 = mr.monodromy[0], m12 = mr.monodromy[1];
    const double m21 = mr.monodromy[2], m22 = mr.monodromy[3];
    // J (M - cI)/s with J = [[0,1],[-1,0]]
    const double s11 = m21 / s, s12 = (m22 - c) / s;
    const double s21 = -(m11 - c) / s, s22 = -m12 / s;
    auto inv = [&](const PhasePoint& z) {
        return s11 * z.x * z.x + (s12 + s21) * z.x * z.p + s22 * z.p * z.p;
    };
    PhasePoint z{0.8, 0.15};
    const double i0 = inv(z);
    const int steps = 4096;
    for (int n = 0; n < 100; ++n) z = advance(z, cfg, 0.0, steps, PI / steps);
    CHECK(std::abs(inv(z) - i0) < 1e-4 * std::abs(i0));
}

TEST_CASE("propagate samples the nearest step and truncates on escape") {
    TrapConfig cfg;
    cfg.a = -0.5; // unstable: exponential growth guarantees escape
    cfg.q = 0.0;
    cfg.coupling = 0.0;
    const std::vector<double> times{0.0, 1.0, 5.0, 40.0};
    const Trajectory tr = propagate({1.0, 0.0}, cfg, 0.0, 40.0, 0.01, times);
    CHECK(tr.diverged);
    CHECK(tr.samples.size() < times.size()); // the tail samples were never reached
    CHECK(tr.samples.front().t == 0.0);
    for (const auto& s : tr.samples) CHECK(std::abs(s.pt.x) <= ESCAPE_RADIUS);

    // stable case: all samples present, stamped on the step grid
    TrapConfig osc;
    osc.a = 1.0;
    osc.q = 0.0;
    osc.coupling = 0.0;
    const Trajectory ok = propagate({1.0, 0.0}, osc, 0.0, 10.0, 0.01, {0.0, 2.504, 10.0});
    REQUIRE(ok.samples.size() == 3);
    CHECK(!ok.diverged);
    CHECK(ok.samples[1].t == doctest::Approx(2.50).epsilon(1e-12));
    CHECK(ok.samples[1].pt.x == doctest::Approx(std::cos(2.50)).epsilon(1e-3));
    CHECK(ok.samples[2].t == doctest::Approx(10.0));
}

TEST_CASE("section rows start with the seed and report divergence periods") {
    TrapConfig cfg; // default trap, standing wave on
    const std::vector<PhasePoint> seeds{{PI, 0.0}, {0.05, 0.0}};
    const Section sec = poincare_section(cfg, seeds, 20);
    REQUIRE(sec.points.size() == 2);
    CHECK(sec.points[0][0] == seeds[0]);
    CHECK(sec.points[1][0] == seeds[1]);
    for (std::size_t s = 0; s < 2; ++s) {
        if (sec.diverged_at_period[s] < 0)
            CHECK(sec.points[s].size() == 21);
        else
            CHECK(static_cast<int>(sec.points[s].size()) <= sec.diverged_at_period[s]);
    }
    CHECK_THROWS_AS(poincare_section(cfg, seeds, -1), ConfigError);
}

TEST_CASE("gaussian ensemble statistics and reproducibility") {
    EnsembleSpec spec;
    spec.count = 20000;
    spec.center = {0.5, -0.25};
    spec.sigma_x = 0.6;
    spec.sigma_p = 0.3;
    spec.seed = 777;
    const auto pts = sample_gaussian_ensemble(spec);
    const Moments m = ensemble_moments(pts);
    // standard error ~ sigma/sqrt(N) ~ 0.004: use 5-sigma bounds
    CHECK(std::abs(m.mean_x - 0.5) < 0.022);
    CHECK(std::abs(m.mean_p + 0.25) < 0.011);
    CHECK(std::abs(m.sd_x - 0.6) < 0.02);
    CHECK(std::abs(m.sd_p - 0.3) < 0.01);

    const auto again = sample_gaussian_ensemble(spec);
    CHECK(pts == again);
    spec.seed = 778;
    CHECK(sample_gaussian_ensemble(spec) != pts);

    spec.count = 0;
    CHECK_THROWS_AS(sample_gaussian_ensemble(spec), ConfigError);
}

TEST_CASE("moments match a hand-computed three-point ensemble") {
    const std::vector<PhasePoint> pts{{1.0, 2.0}, {2.0, 0.0}, {6.0, -2.0}};
    const Moments m = ensemble_moments(pts);
    CHECK(m.mean_x == doctest::Approx(3.0));
    CHECK(m.mean_p == doctest::Approx(0.0));
    CHECK(m.sd_x == doctest::Approx(std::sqrt(7.0)).epsilon(1e-12));  // unbiased
    CHECK(m.sd_p == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(ensemble_moments({}), ConfigError);
}

TEST_CASE("cycle average removes an exactly period-commensurate oscillation") {
    MomentsSeries in;
    const int per_period = 8;
    const double dt = PI / per_period;
    for (int s = 0; s <= 3 * per_period; ++s) {
        const double t = s * dt;
        // trend + pi-periodic ripple that sums to zero over 8 uniform samples
        in.push(t, 2.0 + std::sin(2.0 * t), 0.0, 1.0 + 0.5 * std::cos(2.0 * t), 1.0);
    }
    const MomentsSeries avg = cycle_average(in);
    REQUIRE(avg.size() == 3);
    for (std::size_t k = 0; k < avg.size(); ++k) {
        CHECK(avg.mean_x[k] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(avg.sd_x[k] == doctest::Approx(1.0).epsilon(1e-12));
    }
    // window means sit at the window's mean sample time
    CHECK(avg.t[0] == doctest::Approx(3.5 * dt).epsilon(1e-9));

    MomentsSeries ragged;
    ragged.push(0.0, 0, 0, 0, 0);
    ragged.push(0.1, 0, 0, 0, 0);
    ragged.push(0.3, 0, 0, 0, 0); // non-uniform spacing
    CHECK_THROWS_AS(cycle_average(ragged), ConfigError);

    MomentsSeries tooshort;
    tooshort.push(0.0, 0, 0, 0, 0);
    tooshort.push(1.0, 0, 0, 0, 0); // spacing does not tile pi
    CHECK_THROWS_AS(cycle_average(tooshort), ConfigError);
}

TEST_CASE("window slope and mean on a known line") {
    std::vector<double> t, y;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.1 * i);
        y.push_back(3.0 - 0.7 * (0.1 * i));
    }
    CHECK(window_slope(t, y, 2.0, 8.0) == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(window_mean(t, y, 2.0, 8.0) == doctest::Approx(3.0 - 0.7 * 5.0).epsilon(1e-12));
    CHECK_THROWS_AS(window_slope(t, y, 9.9, 9.91), ConfigError); // single point: no slope
}

TEST_CASE("ensemble propagation equals a direct per-trajectory loop") {
    TrapConfig cfg;
    EnsembleSpec spec;
    spec.count = 7; // deliberately not a multiple of the internal chunk size
    spec.sigma_x = 0.5;
    spec.sigma_p = 0.25;
    spec.seed = 42;
    const auto init = sample_gaussian_ensemble(spec);

    EnsembleRunParams params;
    params.t_final = 4 * PI;
    params.dt = PI / 64;
    params.snapshots_per_period = 4;
    params.window_lo = 0.0;
    params.window_hi = 4 * PI;
    params.hist_bins = 10;
    params.hist_x_range = 12.0;
    params.hist_p_range = 5.0;
    const EnsembleRunResult run = propagate_ensemble(init, cfg, params);

    REQUIRE(run.moments.size() == 17); // 4 periods x 4 snapshots + initial
    // oracle: step every trajectory by hand and recompute the recorded moments
    std::vector<PhasePoint> pts = init;
    const double dt = PI / 64;
    std::size_t sample = 1;
    for (int s = 0; s < 256; ++s) {
        for (auto& pt : pts) pt = step(pt, cfg, s * dt, dt);
        if ((s + 1) % 16 == 0) {
            const Moments m = ensemble_moments(pts);
            CHECK(run.moments.mean_x[sample] == doctest::Approx(m.mean_x).epsilon(1e-12));
            CHECK(run.moments.sd_x[sample] == doctest::Approx(m.sd_x).epsilon(1e-12));
            CHECK(run.moments.sd_p[sample] == doctest::Approx(m.sd_p).epsilon(1e-12));
            ++sample;
        }
    }
    CHECK(run.diverged == 0);
    // every recorded snapshot of every trajectory fell into the histogram
    std::int64_t total = 0;
    for (auto cnt : run.x_counts) total += cnt;
    CHECK(total == 7 * 17);
}

TEST_CASE("escape freezes a trajectory without poisoning the ensemble") {
    TrapConfig cfg;
    cfg.a = -1.0; // inverted: everything escapes quickly
    cfg.q = 0.0;
    cfg.coupling = 0.0;
    std::vector<PhasePoint> init{{1.0, 0.0}, {0.5, 0.1}};
    EnsembleRunParams params;
    params.t_final = 16 * PI;
    params.dt = PI / 64;
    params.snapshots_per_period = 1;
    const EnsembleRunResult run = propagate_ensemble(init, cfg, params);
    CHECK(run.diverged == 2);
    for (double v : run.moments.sd_x) CHECK(std::isfinite(v));
    CHECK(run.max_abs_x >= ESCAPE_RADIUS);
}

TEST_CASE("escaped flags non-finite coordinates") {
    CHECK(escaped({std::numeric_limits<double>::quiet_NaN(), 0.0}));
    CHECK(escaped({0.0, std::numeric_limits<double>::infinity()}));
    CHECK(escaped({201.0, 0.0}));
    CHECK(!escaped({199.0, -199.0}));
}
