#include "paulloc/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paulloc/fft.hpp"
#include "paulloc/pool.hpp"
#include "paulloc/quantum.hpp"

namespace paulloc {

MonodromyOperator build_monodromy(const TrapConfig& cfg, const ReferenceBasis& basis,
                                  double dt, double elapsed, int workers) {
    if (!(dt > 0.0)) throw ConfigError("build_monodromy: dt must be positive");
    if (elapsed < 0.0) throw ConfigError("build_monodromy: negative propagation span");
    const int m = basis.size;
    const int n = basis.grid.n;
    const auto steps = static_cast<long long>(std::llround(elapsed / dt));
    const double h = steps > 0 ? elapsed / static_cast<double>(steps) : 0.0;

    MonodromyOperator op;
    op.u.resize(m, m);
    op.cfg = cfg;
    op.dt = h;
    op.elapsed = elapsed;
    op.nu = basis.nu;

    const double dx = basis.grid.dx();
    parallel_items(m, workers, [&](int j) {
        WaveState st;
        st.grid = basis.grid;
        st.t = 0.0;
        st.psi.assign(basis.col(j), basis.col(j) + n);
        try {
            for (long long s = 0; s < steps; ++s) split_step(st, cfg, h);
        } catch (const GuardError& e) {
            throw GuardError("monodromy column " + std::to_string(j) + ": " + e.what());
        }
        for (int row = 0; row < m; ++row) {
            const double* chi = basis.col(row);
            std::complex<double> acc = 0.0;
            for (int i = 0; i < n; ++i) acc += chi[i] * st.psi[i];
            op.u(row, j) = acc * dx;
        }
    });

    op.trusted = (m + 4) / 5; // ceil(M/5)
    const Eigen::MatrixXcd g = op.u.adjoint() * op.u - Eigen::MatrixXcd::Identity(m, m);
    for (int j = 0; j < m; ++j) {
        const double cj = g.col(j).norm();
        op.defect_all = std::max(op.defect_all, cj);
        if (j < op.trusted) op.defect = std::max(op.defect, cj);
    }
    return op;
}

namespace {

// orthonormalize eigenvector groups whose eigenvalue phases are
// indistinguishable (gap below CLUSTER_PHASE_GAP), including circular wrap
void reorthonormalize_clusters(Eigen::MatrixXcd& v, const std::vector<double>& theta) {
    const int m = static_cast<int>(theta.size());
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return theta[a] < theta[b]; });

    std::vector<std::vector<int>> groups;
    for (int k = 0; k < m; ++k) {
        const int i = order[k];
        if (k > 0 && theta[i] - theta[order[k - 1]] < CLUSTER_PHASE_GAP)
            groups.back().push_back(i);
        else
            groups.push_back({i});
    }
    if (groups.size() > 1) {
        const double wrap_gap = theta[groups.front().front()] + 2.0 * PI - theta[groups.back().back()];
        if (wrap_gap < CLUSTER_PHASE_GAP) {
            for (int i : groups.back()) groups.front().push_back(i);
            groups.pop_back();
        }
    }
    for (const auto& grp : groups) {
        if (grp.size() < 2) continue;
        for (std::size_t a = 0; a < grp.size(); ++a) {
            auto col = v.col(grp[a]);
            for (std::size_t b = 0; b < a; ++b)
                col -= v.col(grp[b]).dot(col) * v.col(grp[b]);
            const double nn = col.norm();
            if (nn > 0) col /= nn;
        }
    }
}

} // namespace

FloquetSet floquet_spectrum(const MonodromyOperator& op, const ReferenceBasis& basis,
                            double defect_limit) {
    const int m = basis.size;
    if (op.u.rows() != m || op.u.cols() != m)
        throw ConfigError("floquet_spectrum: operator/basis size mismatch");
    if (op.defect > defect_limit)
        throw GuardError("floquet_spectrum: unitarity defect " + std::to_string(op.defect)
                         + " exceeds " + std::to_string(defect_limit)
                         + " (basis too small for this coupling)");

    // polar factor: the unitary closest to the computed operator
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(op.u, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd q = svd.matrixU() * svd.matrixV().adjoint();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(q);
    if (es.info() != Eigen::Success)
        throw GuardError("floquet_spectrum: eigendecomposition failed");
    Eigen::MatrixXcd v = es.eigenvectors();
    const Eigen::VectorXcd lam = es.eigenvalues();

    std::vector<double> theta(m);
    for (int k = 0; k < m; ++k) theta[k] = std::arg(lam(k)) + PI; // in [0, 2pi)
    reorthonormalize_clusters(v, theta);

    // state metrics on the grid
    const Grid& g = basis.grid;
    const int n = g.n;
    const double dx = g.dx();
    const std::vector<double> pg = g.momenta();
    Fft fft(n);

    FloquetSet fs;
    fs.size = m;
    fs.nu = basis.nu;
    fs.defect = op.defect;
    fs.mu.resize(m);
    fs.parity.resize(m);
    fs.energy.resize(m);
    fs.island_weight.resize(m);
    fs.residual.resize(m);
    fs.unresolved.resize(m);

    const bool parity_defined = op.cfg.phase == 0.0;
    std::vector<std::complex<double>> ongrid(n);
    for (int k = 0; k < m; ++k) {
        fs.mu[k] = wrap2(-std::arg(lam(k)) / PI);

        double pw = 0.0;
        for (int row = 0; row < m; ++row) {
            const double w = std::norm(v(row, k));
            pw += (row % 2 == 0 ? w : -w);
        }
        fs.parity[k] = parity_defined ? (pw >= 0.0 ? 1 : -1) : 0;

        std::fill(ongrid.begin(), ongrid.end(), std::complex<double>(0.0));
        for (int row = 0; row < m; ++row) {
            const double* chi = basis.col(row);
            const std::complex<double> c = v(row, k);
            if (c == std::complex<double>(0.0)) continue;
            for (int i = 0; i < n; ++i) ongrid[i] += c * chi[i];
        }
        double wsum = 0, pot = 0, isl = 0;
        for (int i = 0; i < n; ++i) {
            const double d = std::norm(ongrid[i]);
            const double x = g.x(i);
            wsum += d;
            pot += d * (0.5 * op.cfg.a * x * x
                        + op.cfg.coupling * std::cos(x + 2.0 * op.cfg.phase));
            isl += d * (-std::cos(x));
        }
        fft.forward(ongrid.data());
        double wp = 0, kin = 0;
        for (int i = 0; i < n; ++i) {
            const double d = std::norm(ongrid[i]);
            wp += d;
            kin += d * 0.5 * pg[i] * pg[i];
        }
        fs.energy[k] = pot / wsum + kin / wp;
        fs.island_weight[k] = isl / wsum;

        const Eigen::VectorXcd rvec =
            op.u * v.col(k) - std::polar(1.0, -fs.mu[k] * PI) * v.col(k);
        fs.residual[k] = rvec.norm();
        fs.unresolved[k] = fs.residual[k] > RESIDUAL_UNRESOLVED ? 1 : 0;
    }

    // order everything by ascending time-averaged energy
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs.energy[a] < fs.energy[b]; });

    FloquetSet out;
    out.size = m;
    out.nu = fs.nu;
    out.defect = fs.defect;
    out.modes.resize(m, m);
    for (int k = 0; k < m; ++k) {
        const int src = order[k];
        out.mu.push_back(fs.mu[src]);
        out.parity.push_back(fs.parity[src]);
        out.energy.push_back(fs.energy[src]);
        out.island_weight.push_back(fs.island_weight[src]);
        out.residual.push_back(fs.residual[src]);
        out.unresolved.push_back(fs.unresolved[src]);
        out.modes.col(k) = v.col(src);
    }
    return out;
}

ExpansionReport expansion_coefficients(const WaveState& state, const FloquetSet& fset,
                                       const ReferenceBasis& basis) {
    if (!(state.grid == basis.grid))
        throw ConfigError("expansion_coefficients: state and basis grids differ");
    const int m = fset.size;
    const int n = basis.grid.n;
    const double dx = basis.grid.dx();

    // basis coordinates of the state, then rotate into the mode frame
    Eigen::VectorXcd c(m);
    for (int row = 0; row < m; ++row) {
        const double* chi = basis.col(row);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < n; ++i) acc += chi[i] * state.psi[i];
        c(row) = acc * dx;
    }
    const Eigen::VectorXcd a = fset.modes.adjoint() * c;

    ExpansionReport rep;
    rep.coeffs.resize(m);
    rep.weights.resize(m);
    for (int k = 0; k < m; ++k) {
        rep.coeffs[k] = a(k);
        rep.weights[k] = std::norm(a(k));
        rep.completeness += rep.weights[k];
    }
    rep.by_weight.resize(m);
    std::iota(rep.by_weight.begin(), rep.by_weight.end(), 0);
    std::sort(rep.by_weight.begin(), rep.by_weight.end(),
              [&](int x, int y) { return rep.weights[x] > rep.weights[y]; });
    rep.low_completeness = rep.completeness < 0.95;
    return rep;
}

Distribution floquet_position_distribution(const FloquetSet& fset,
                                           const ReferenceBasis& basis, int k) {
    if (k < 0 || k >= fset.size)
        throw ConfigError("floquet_position_distribution: state index out of range");
    const int n = basis.grid.n;
    Distribution d;
    d.spacing = basis.grid.dx();
    d.center.resize(n);
    d.density.assign(n, 0.0);
    std::vector<std::complex<double>> ongrid(n, 0.0);
    for (int row = 0; row < fset.size; ++row) {
        const std::complex<double> c = fset.modes(row, k);
        const double* chi = basis.col(row);
        for (int i = 0; i < n; ++i) ongrid[i] += c * chi[i];
    }
    for (int i = 0; i < n; ++i) {
        d.center[i] = basis.grid.x(i);
        d.density[i] = std::norm(ongrid[i]);
    }
    d.normalize();
    return d;
}

std::vector<Doublet> detect_doublets(const FloquetSet& fset, double tolerance) {
    std::vector<Doublet> out;
    for (int k = 0; k + 1 < fset.size; ++k) {
        if (fset.parity[k] * fset.parity[k + 1] != -1) continue;
        const double s = circ_dist(fset.mu[k], fset.mu[k + 1]);
        if (s < tolerance) out.push_back({k, k + 1, s});
    }
    return out;
}

namespace {

// continuation constants for the doublet tracker
constexpr double TRACK_TOL = 0.02;   // window around the prediction once locked
constexpr double TRACK_AMB = 0.015;  // two candidates closer than this: ambiguous
constexpr double TRACK_LOCMIN = 0.35; // island weight below which a candidate is distrusted
constexpr double TRACK_WGROW = 0.01; // window growth per coasted point
constexpr double TRACK_WCAP = 0.08;
constexpr double TRACK_W0 = 0.06;    // window before the slope is established

struct SeriesResult {
    std::vector<double> mu;
    std::vector<char> flag;
    std::vector<int> index;
};

SeriesResult track_series(const std::vector<double>& omegas,
                          const std::vector<FloquetSet>& pts, int sign) {
    const int np = static_cast<int>(omegas.size());
    SeriesResult r;
    r.mu.resize(np);
    r.flag.assign(np, 0);
    r.index.assign(np, -1);

    auto candidates = [&](int i) {
        std::vector<int> c;
        for (int k = 0; k < pts[i].size; ++k)
            if (pts[i].parity[k] == sign) c.push_back(k);
        if (c.empty()) throw GuardError("doublet track: no states of requested parity");
        return c;
    };
    auto min_energy = [&](int i, const std::vector<int>& c) {
        int best = c.front();
        for (int k : c)
            if (pts[i].energy[k] < pts[i].energy[best]) best = k;
        return best;
    };

    const auto c0 = candidates(0);
    const int j0 = min_energy(0, c0);
    double u = pts[0].mu[j0];
    r.mu[0] = wrap2(u);
    r.index[0] = j0;
    double lr_u = u;
    int lr_i = 0;
    double slope = 0.0;
    bool slope_set = false;
    double window = TRACK_W0;

    for (int i = 1; i < np; ++i) {
        const double pred = lr_u + (slope_set ? slope * (i - lr_i) : 0.0);
        const double predw = wrap2(pred);
        const auto cand = candidates(i);
        const int je = min_energy(i, cand);

        bool resolved = false;
        int j = -1;
        if (circ_dist(pts[i].mu[je], predw) <= window) {
            j = je;
            resolved = true;
        } else {
            std::vector<std::pair<double, int>> dists;
            for (int k : cand) dists.emplace_back(circ_dist(pts[i].mu[k], predw), k);
            std::sort(dists.begin(), dists.end());
            if (dists.front().first <= window) {
                const int jj = dists.front().second;
                const bool ambiguous = dists.size() > 1 && dists[1].first <= window
                    && (dists[1].first - dists[0].first) < TRACK_AMB;
                const bool weak = omegas[i] >= 0.25 && pts[i].island_weight[jj] < TRACK_LOCMIN;
                if (!ambiguous && !weak) {
                    j = jj;
                    resolved = true;
                }
            }
        }

        if (resolved) {
            u = pred + circ_signed(pts[i].mu[j], predw);
            if (lr_i != i) {
                slope = (u - lr_u) / (i - lr_i);
                slope_set = true;
            }
            lr_u = u;
            lr_i = i;
            window = TRACK_TOL;
            r.index[i] = j;
        } else {
            u = pred;
            window = std::min(window + TRACK_WGROW, TRACK_WCAP);
        }
        r.mu[i] = wrap2(u);
        r.flag[i] = resolved ? 0 : 1;
    }
    return r;
}

} // namespace

SweepResult sweep_quasienergies(TrapConfig base, const std::vector<double>& omegas,
                                const ReferenceBasis& basis, const SweepOptions& opts) {
    if (omegas.empty()) throw ConfigError("sweep: empty coupling list");
    for (std::size_t i = 1; i < omegas.size(); ++i)
        if (!(omegas[i] > omegas[i - 1]))
            throw ConfigError("sweep: coupling values must be strictly increasing");

    SweepResult res;
    res.omegas = omegas;
    res.points.resize(omegas.size());
    parallel_items(static_cast<int>(omegas.size()), opts.workers, [&](int i) {
        TrapConfig cfg = base;
        cfg.coupling = omegas[i];
        const MonodromyOperator op = build_monodromy(cfg, basis, opts.dt, PI, 1);
        res.points[i] = floquet_spectrum(op, basis, opts.defect_limit);
    });

    const SeriesResult even = track_series(omegas, res.points, +1);
    const SeriesResult odd = track_series(omegas, res.points, -1);

    DoubletTrack& d = res.doublet;
    d.mu_even = even.mu;
    d.mu_odd = odd.mu;
    d.flag_even = even.flag;
    d.flag_odd = odd.flag;
    d.index_even = even.index;
    d.index_odd = odd.index;
    d.splitting.resize(omegas.size());
    d.overlap_even.assign(omegas.size(), 1.0);
    d.overlap_odd.assign(omegas.size(), 1.0);
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        d.splitting[i] = circ_dist(d.mu_even[i], d.mu_odd[i]);
        if (i == 0) continue;
        auto overlap = [&](const std::vector<int>& idx, std::vector<double>& out,
                           const char* label) {
            if (idx[i] < 0 || idx[i - 1] < 0) {
                out[i] = 0.0;
                return;
            }
            const std::complex<double> ov =
                res.points[i - 1].modes.col(idx[i - 1]).dot(res.points[i].modes.col(idx[i]));
            out[i] = std::abs(ov);
            if (out[i] < 0.5)
                res.warnings.push_back(std::string(label) + " mode overlap "
                                       + std::to_string(out[i]) + " below 0.5 at coupling "
                                       + std::to_string(omegas[i]));
        };
        overlap(d.index_even, d.overlap_even, "even");
        overlap(d.index_odd, d.overlap_odd, "odd");
    }
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (d.flag_even[i] || d.flag_odd[i])
            res.warnings.push_back("doublet coasted (tracking ambiguity) at coupling "
                                   + std::to_string(omegas[i]));
    }
    return res;
}

} // namespace paulloc
