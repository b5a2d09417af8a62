#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "paulloc/distribution.hpp"
#include "paulloc/hermite.hpp"
#include "paulloc/model.hpp"

namespace paulloc {

// quasienergies live on a circle of circumference 2
inline double wrap2(double m) {
    const double r = std::fmod(m, 2.0);
    return r < 0.0 ? r + 2.0 : r;
}
inline double circ_signed(double a, double b) { // in (-1, 1]
    const double d = wrap2(a - b);
    return d > 1.0 ? d - 2.0 : d;
}
inline double circ_dist(double a, double b) { return std::abs(circ_signed(a, b)); }
inline double dist_to_zero(double m) {
    const double w = wrap2(m);
    return std::min(w, 2.0 - w);
}

struct MonodromyOperator {
    Eigen::MatrixXcd u;     // u(m, n) = <chi_m | chi_n propagated over [0, elapsed]>
    TrapConfig cfg;
    double dt = 0.0;
    double elapsed = PI;
    double nu = 0.0;
    // Unitarity defect: max column 2-norm of (U^H U - I).  The full matrix is
    // dominated by the top of the truncated basis, which always leaks; the
    // reported defect covers the lowest ceil(M/5) columns actually consumed
    // downstream.  defect_all records the whole-matrix value.
    double defect = 0.0;
    double defect_all = 0.0;
    int trusted = 0;
};

MonodromyOperator build_monodromy(const TrapConfig& cfg, const ReferenceBasis& basis,
                                  double dt, double elapsed = PI, int workers = 1);

inline constexpr double DEFECT_REJECT = 1e-2;
inline constexpr double RESIDUAL_UNRESOLVED = 0.05;
inline constexpr double CLUSTER_PHASE_GAP = 1e-6;

// Floquet modes of one drive period, ordered by ascending time-averaged
// energy <p^2/2 + a x^2/2 + coupling cos(x + 2 phase)>.
struct FloquetSet {
    std::vector<double> mu;            // quasienergy in [0, 2)
    Eigen::MatrixXcd modes;            // basis coordinates, one column per state
    std::vector<int> parity;           // +1 even, -1 odd, 0 unassigned (phase != 0)
    std::vector<double> energy;
    std::vector<double> island_weight; // <-cos x>: near 1 on the +-pi islands
    std::vector<double> residual;      // ||U v - e^{-i mu pi} v|| against the raw operator
    std::vector<char> unresolved;      // residual above RESIDUAL_UNRESOLVED
    double defect = 0.0;
    double nu = 0.0;
    int size = 0;
};

// Eigendecomposition of the closest unitary matrix (polar factor) to the
// computed monodromy: restores an orthonormal mode frame that the raw
// truncated operator cannot provide.  States mixing with the leaky top of the
// basis keep large raw residuals and are flagged unresolved.  Rejects
// operators whose trusted-block defect exceeds defect_limit; small-basis
// sweeps pass a looser limit and rely on per-state residual flags instead.
FloquetSet floquet_spectrum(const MonodromyOperator& op, const ReferenceBasis& basis,
                            double defect_limit = DEFECT_REJECT);

struct ExpansionReport {
    std::vector<std::complex<double>> coeffs; // state-index aligned with the set
    std::vector<double> weights;
    double completeness = 0.0;
    std::vector<int> by_weight;               // indices sorted by descending weight
    bool low_completeness = false;            // completeness < 0.95
};

ExpansionReport expansion_coefficients(const WaveState& state, const FloquetSet& fset,
                                       const ReferenceBasis& basis);

Distribution floquet_position_distribution(const FloquetSet& fset,
                                           const ReferenceBasis& basis, int k);

struct Doublet {
    int i = 0, j = 0;       // adjacent states in energy order
    double splitting = 0.0; // circular quasienergy distance
};

// Energy-adjacent opposite-parity pairs closer than the tolerance.
std::vector<Doublet> detect_doublets(const FloquetSet& fset, double tolerance);

// Tracked lowest even/odd pair through the coupling sweep.  Points where no
// trustworthy candidate exists take the extrapolated value and are flagged.
struct DoubletTrack {
    std::vector<double> mu_even, mu_odd;
    std::vector<char> flag_even, flag_odd;
    std::vector<int> index_even, index_odd;       // chosen state, -1 while coasting
    std::vector<double> overlap_even, overlap_odd; // mode continuity between points
    std::vector<double> splitting;
};

struct SweepResult {
    std::vector<double> omegas;
    std::vector<FloquetSet> points;
    DoubletTrack doublet;
    std::vector<std::string> warnings;
};

struct SweepOptions {
    double dt = PI / 1024;
    int workers = 1;
    // Small sweep bases lose unitarity in the trusted block at strong coupling
    // (defect ~0.1 at M=40, coupling 0.7); accept and let residual flags rule.
    double defect_limit = 0.5;
};

SweepResult sweep_quasienergies(TrapConfig base, const std::vector<double>& omegas,
                                const ReferenceBasis& basis, const SweepOptions& opts);

} // namespace paulloc
