#include "doctest.h"

#include <vector>

#include "paulloc/classical.hpp"
#include "paulloc/floquet.hpp"
#include "paulloc/hermite.hpp"

using namespace paulloc;

namespace {

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

TEST_CASE("ensemble propagation is bitwise identical for any worker count") {
    TrapConfig cfg;
    EnsembleSpec spec;
    spec.count = 300; // not a multiple of the scheduling chunk
    spec.sigma_x = std::sqrt(0.29);
    spec.sigma_p = 0.29 / (2.0 * std::sqrt(0.29));
    spec.seed = 99;
    const std::vector<PhasePoint> initial = sample_gaussian_ensemble(spec);

    EnsembleRunParams params;
    params.t_final = 4.0 * PI;
    params.dt = PI / 256;
    params.window_lo = 2.0 * PI;
    params.window_hi = 4.0 * PI;
    params.hist_bins = 40;

    params.workers = 1;
    const EnsembleRunResult one = propagate_ensemble(initial, cfg, params);
    for (int workers : {2, 3, 7}) {
        params.workers = workers;
        const EnsembleRunResult w = propagate_ensemble(initial, cfg, params);
        CHECK(identical(w.moments.t, one.moments.t));
        CHECK(identical(w.moments.mean_x, one.moments.mean_x));
        CHECK(identical(w.moments.mean_p, one.moments.mean_p));
        CHECK(identical(w.moments.sd_x, one.moments.sd_x));
        CHECK(identical(w.moments.sd_p, one.moments.sd_p));
        CHECK(w.x_counts == one.x_counts);
        CHECK(w.p_counts == one.p_counts);
        CHECK(w.diverged == one.diverged);
        CHECK(w.max_abs_x == one.max_abs_x);
        CHECK(w.max_abs_p == one.max_abs_p);
    }
}

TEST_CASE("monodromy construction is bitwise identical for any worker count") {
    Grid grid{-20.0, 20.0, 512, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, 0.29, 16);
    TrapConfig cfg;
    const MonodromyOperator one = build_monodromy(cfg, basis, PI / 256, PI, 1);
    for (int workers : {3, 5}) {
        const MonodromyOperator w = build_monodromy(cfg, basis, PI / 256, PI, workers);
        REQUIRE(w.u.rows() == one.u.rows());
        bool same = true;
        for (int r = 0; r < w.u.rows() && same; ++r)
            for (int c = 0; c < w.u.cols() && same; ++c)
                same = w.u(r, c) == one.u(r, c);
        CHECK(same);
        CHECK(w.defect == one.defect);
        CHECK(w.defect_all == one.defect_all);
    }
}
