#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "paulloc/floquet.hpp"
#include "paulloc/model.hpp"
#include "paulloc/quantum.hpp"

using namespace paulloc;

namespace {

const std::complex<double> I{0.0, 1.0};

} // namespace

TEST_CASE("circular quasienergy helpers") {
    CHECK(wrap2(2.3) == doctest::Approx(0.3));
    CHECK(wrap2(-0.1) == doctest::Approx(1.9));
    CHECK(circ_dist(1.95, 0.05) == doctest::Approx(0.1));
    CHECK(circ_signed(0.05, 1.95) == doctest::Approx(0.1));
    CHECK(circ_signed(1.95, 0.05) == doctest::Approx(-0.1));
    CHECK(dist_to_zero(1.98) == doctest::Approx(0.02));
    CHECK(dist_to_zero(0.02) == doctest::Approx(0.02));
}

TEST_CASE("zero-span monodromy is the identity") {
    Grid grid{-20.0, 20.0, 256, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, 0.5, 12);
    TrapConfig cfg;
    MonodromyOperator op = build_monodromy(cfg, basis, PI / 256, 0.0);
    for (int r = 0; r < op.u.rows(); ++r)
        for (int c = 0; c < op.u.cols(); ++c)
            CHECK(std::abs(op.u(r, c) - (r == c ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("static oscillator monodromy is diagonal with oscillator phases") {
    const double nu = 0.5;
    Grid grid{-20.0, 20.0, 256, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, nu, 16);
    TrapConfig cfg;
    cfg.a = nu * nu;
    cfg.q = 0.0;
    cfg.coupling = 0.0;
    MonodromyOperator op = build_monodromy(cfg, basis, PI / 256);
    CHECK(op.defect < 1e-8);
    for (int n = 0; n < basis.size; ++n) {
        const std::complex<double> expect = std::exp(-I * PI * (n + 0.5) * nu);
        CHECK(std::abs(op.u(n, n) - expect) < 2e-3);
        // splitting error mixes n +- 2 at O(dt^2); everything else stays tiny
        for (int m = 0; m < basis.size; ++m)
            if (m != n) CHECK(std::abs(op.u(m, n)) < 2e-3);
    }

    FloquetSet fset = floquet_spectrum(op, basis);
    REQUIRE(fset.size == basis.size);
    for (int k = 0; k < fset.size; ++k) {
        CHECK(fset.mu[k] >= 0.0);
        CHECK(fset.mu[k] < 2.0);
        CHECK(fset.parity[k] == (k % 2 == 0 ? 1 : -1));
    }
    // the top of the truncated basis leaks; pin the lower half only
    for (int k = 0; k < 8; ++k) {
        // energy order equals oscillator order here
        CHECK(circ_dist(fset.mu[k], wrap2((k + 0.5) * nu)) < 1e-3);
        CHECK(fset.residual[k] < 1e-4);
        CHECK(!fset.unresolved[k]);
    }
    CHECK(fset.energy[0] == doctest::Approx(0.5 * grid.kbar * nu).epsilon(1e-3));
    for (int k = 1; k < fset.size; ++k) CHECK(fset.energy[k] > fset.energy[k - 1]);
    CHECK(fset.island_weight[0] < -0.5); // ground state sits at the origin
}

TEST_CASE("undriven-wave quasienergies form the Mathieu ladder") {
    TrapConfig cfg;
    cfg.coupling = 0.0; // q = 0.4 drive stays on
    const MathieuResult mr = mathieu_exponent(cfg.a, cfg.q);
    REQUIRE(mr.stable);
    Grid grid{-40.0, 40.0, 1024, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, mr.exponent, 20);
    MonodromyOperator op = build_monodromy(cfg, basis, PI / 512);
    FloquetSet fset = floquet_spectrum(op, basis);
    for (int k = 0; k < 6; ++k) {
        CHECK(circ_dist(fset.mu[k], wrap2((k + 0.5) * mr.exponent)) < 2e-3);
        CHECK(fset.parity[k] == (k % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("packet expansion over the modes is self-consistent") {
    TrapConfig cfg;
    cfg.coupling = 0.0;
    const MathieuResult mr = mathieu_exponent(cfg.a, cfg.q);
    Grid grid{-40.0, 40.0, 1024, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, mr.exponent, 20);
    MonodromyOperator op = build_monodromy(cfg, basis, PI / 512);
    FloquetSet fset = floquet_spectrum(op, basis);

    WaveState packet = gaussian_packet(grid, 0.0, 0.0, 0.29);
    ExpansionReport rep = expansion_coefficients(packet, fset, basis);
    REQUIRE(static_cast<int>(rep.weights.size()) == fset.size);

    // weights match coefficients and completeness sums them
    double total = 0.0;
    for (int k = 0; k < fset.size; ++k) {
        CHECK(rep.weights[k] == doctest::Approx(std::norm(rep.coeffs[k])).epsilon(1e-12));
        total += rep.weights[k];
    }
    CHECK(rep.completeness == doctest::Approx(total).epsilon(1e-12));
    CHECK(rep.completeness > 0.99); // origin packet lives in the low ladder
    CHECK(rep.completeness < 1.0 + 1e-9);
    CHECK(!rep.low_completeness);

    // by_weight is a descending ordering
    for (std::size_t i = 1; i < rep.by_weight.size(); ++i)
        CHECK(rep.weights[rep.by_weight[i - 1]] >= rep.weights[rep.by_weight[i]]);

    // modes form an orthonormal frame: reconstructing the projected packet
    // from the coefficients reproduces its basis coordinates
    Eigen::VectorXcd proj(fset.size);
    for (int m = 0; m < fset.size; ++m) {
        std::complex<double> s{0.0, 0.0};
        for (int i = 0; i < grid.n; ++i) s += basis.col(m)[i] * packet.psi[i];
        proj(m) = s * grid.dx();
    }
    Eigen::VectorXcd back = Eigen::VectorXcd::Zero(fset.size);
    for (int k = 0; k < fset.size; ++k) back += rep.coeffs[k] * fset.modes.col(k);
    CHECK((back - proj).norm() < 1e-8);

    // mode densities are normalized distributions
    Distribution d = floquet_position_distribution(fset, basis, 0);
    REQUIRE(d.spacing > 0.0);
    double mass = 0.0;
    for (double v : d.density) mass += v * d.spacing;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(floquet_position_distribution(fset, basis, fset.size), ConfigError);
}

TEST_CASE("expansion rejects a state on a different grid") {
    TrapConfig cfg;
    cfg.coupling = 0.0;
    Grid grid{-20.0, 20.0, 512, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, 0.29, 12);
    MonodromyOperator op = build_monodromy(cfg, basis, PI / 512);
    FloquetSet fset = floquet_spectrum(op, basis, 0.05);
    WaveState other = gaussian_packet(Grid{-40.0, 40.0, 512, 0.29}, 0.0, 0.0, 0.29);
    CHECK_THROWS_AS(expansion_coefficients(other, fset, basis), ConfigError);
}

TEST_CASE("spectrum rejects an operator outside the defect budget") {
    TrapConfig cfg;
    cfg.coupling = 0.0;
    Grid grid{-20.0, 20.0, 512, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, 0.29, 12);
    MonodromyOperator op = build_monodromy(cfg, basis, PI / 512);
    CHECK_THROWS_AS(floquet_spectrum(op, basis, 1e-15), GuardError);
}

TEST_CASE("doublet detection pairs adjacent opposite-parity states") {
    FloquetSet fset;
    fset.size = 5;
    fset.mu = {0.10, 0.11, 0.50, 1.99, 0.005};
    fset.parity = {1, -1, 1, -1, 1};
    fset.energy = {0.1, 0.2, 0.3, 0.4, 0.5};

    auto dbl = detect_doublets(fset, 0.02);
    REQUIRE(dbl.size() == 2);
    CHECK(dbl[0].i == 0);
    CHECK(dbl[0].j == 1);
    CHECK(dbl[0].splitting == doctest::Approx(0.01));
    // quasienergy distance wraps around the circle
    CHECK(dbl[1].i == 3);
    CHECK(dbl[1].j == 4);
    CHECK(dbl[1].splitting == doctest::Approx(0.015));

    // same-parity neighbors never form a doublet
    fset.parity = {1, 1, 1, -1, -1};
    CHECK(detect_doublets(fset, 0.02).empty());
}

TEST_CASE("coupling sweep tracks the lowest even/odd pair") {
    TrapConfig cfg;
    const MathieuResult mr = mathieu_exponent(cfg.a, cfg.q);
    Grid grid{-40.0, 40.0, 512, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, mr.exponent, 12);
    SweepOptions opts;
    opts.dt = PI / 512;
    // production steps: the tracker's continuation window assumes mu moves
    // by well under 0.06 between adjacent coupling values
    SweepResult sweep = sweep_quasienergies(cfg, {0.0, 0.01, 0.02}, basis, opts);

    REQUIRE(sweep.omegas.size() == 3);
    REQUIRE(sweep.points.size() == 3);
    REQUIRE(sweep.doublet.mu_even.size() == 3);
    REQUIRE(sweep.doublet.splitting.size() == 3);

    CHECK(circ_dist(sweep.doublet.mu_even[0], wrap2(0.5 * mr.exponent)) < 2e-3);
    CHECK(circ_dist(sweep.doublet.mu_odd[0], wrap2(1.5 * mr.exponent)) < 2e-3);
    for (int i = 0; i < 3; ++i) {
        CHECK(!sweep.doublet.flag_even[i]);
        CHECK(!sweep.doublet.flag_odd[i]);
        CHECK(sweep.doublet.index_even[i] >= 0);
        CHECK(sweep.doublet.index_odd[i] >= 0);
        if (i > 0) {
            CHECK(sweep.doublet.overlap_even[i] > 0.9);
            CHECK(sweep.doublet.overlap_odd[i] > 0.9);
        }
        CHECK(sweep.doublet.splitting[i] ==
              doctest::Approx(circ_dist(sweep.doublet.mu_even[i], sweep.doublet.mu_odd[i])));
    }

    CHECK_THROWS_AS(sweep_quasienergies(cfg, {0.1, 0.1}, basis, opts), ConfigError);
    CHECK_THROWS_AS(sweep_quasienergies(cfg, {}, basis, opts), ConfigError);
}
