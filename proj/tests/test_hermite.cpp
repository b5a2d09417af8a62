#include "doctest.h"

#include <cmath>
#include <vector>

#include "paulloc/hermite.hpp"
#include "paulloc/quantum.hpp"

using namespace paulloc;

namespace {

double overlap(const Grid& grid, const double* a, const double* b) {
    double s = 0.0;
    for (int i = 0; i < grid.n; ++i) s += a[i] * b[i];
    return s * grid.dx();
}

} // namespace

TEST_CASE("reference eigenstates carry oscillator moments") {
    Grid grid; // (-80, 80) x 4096, kbar 0.29
    const double nu = 0.29;
    for (int order : {0, 1, 5}) {
        WaveState st = reference_eigenstate(grid, nu, order);
        CHECK(std::abs(norm(st) - 1.0) < 1e-12);
        QuantumMoments m = moments(st);
        const double var_x = (order + 0.5) * grid.kbar / nu;
        const double var_p = (order + 0.5) * grid.kbar * nu;
        CHECK(std::abs(m.mean_x) < 1e-10);
        CHECK(std::abs(m.mean_p) < 1e-10);
        CHECK(m.sd_x == doctest::Approx(std::sqrt(var_x)).epsilon(1e-9));
        CHECK(m.sd_p == doctest::Approx(std::sqrt(var_p)).epsilon(1e-9));
    }
}

TEST_CASE("ground state equals the minimum-uncertainty packet of matching width") {
    Grid grid;
    const double nu = 0.8;
    WaveState ground = reference_eigenstate(grid, nu, 0);
    WaveState packet = gaussian_packet(grid, 0.0, 0.0, grid.kbar / (2.0 * nu));
    std::complex<double> ov{0.0, 0.0};
    for (int i = 0; i < grid.n; ++i) ov += std::conj(packet.psi[i]) * ground.psi[i];
    CHECK(std::abs(ov * grid.dx()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("basis columns are orthonormal on the default grid") {
    Grid grid;
    ReferenceBasis basis = build_reference_basis(grid, 0.29, 200);
    REQUIRE(basis.size == 200);
    double worst = 0.0;
    for (int i = 0; i < basis.size; ++i) {
        for (int j = i; j < basis.size; ++j) {
            const double g = overlap(grid, basis.col(i), basis.col(j));
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("basis columns alternate parity exactly") {
    Grid grid{-20.0, 20.0, 512, 0.29};
    ReferenceBasis basis = build_reference_basis(grid, 0.4, 8);
    // x(n - i) = -x(i) for i >= 1; x(0) = x_min has no mirror point
    for (int j = 0; j < basis.size; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const double* c = basis.col(j);
        double dev = 0.0;
        for (int i = 1; i < grid.n; ++i)
            dev = std::max(dev, std::abs(c[grid.n - i] - sign * c[i]));
        CHECK(dev < 1e-13);
    }
}

TEST_CASE("basis construction rejects bad requests") {
    Grid coarse{-4.0, 4.0, 64, 0.29};
    // order 7 has its classical turning point at the box edge: not resolvable
    CHECK_THROWS_AS(build_reference_basis(coarse, 0.29, 8), ConfigError);
    // truncation sanity: M must stay below n/8
    CHECK_THROWS_AS(build_reference_basis(coarse, 0.29, 9), ConfigError);
    CHECK_THROWS_AS(build_reference_basis(coarse, 0.29, 0), ConfigError);
    Grid grid;
    CHECK_THROWS_AS(build_reference_basis(grid, 0.0, 4), ConfigError);
    CHECK_THROWS_AS(build_reference_basis(grid, -0.3, 4), ConfigError);
    CHECK_THROWS_AS(reference_eigenstate(grid, 0.29, -1), ConfigError);
}
