#include "paulloc/hermite.hpp"

#include <cmath>
#include <string>

namespace paulloc {

namespace {

// Fills columns 0..m-1 of the normalized oscillator eigenfunctions.
std::vector<double> recurrence_columns(const Grid& grid, double nu, int m_states) {
    if (!(nu > 0.0)) throw ConfigError("reference basis: nu must be positive");
    const int n = grid.n;
    std::vector<double> cols(static_cast<std::size_t>(m_states) * n);
    const double alpha = std::sqrt(nu / grid.kbar);      // xi = alpha x
    const double amp = std::sqrt(alpha) / std::pow(PI, 0.25);
    const double dx = grid.dx();

    std::vector<double> prev(n), cur(n);
    for (int j = 0; j < m_states; ++j) {
        double* out = cols.data() + static_cast<std::size_t>(j) * n;
        for (int i = 0; i < n; ++i) {
            const double xi = alpha * grid.x(i);
            double v;
            if (j == 0) {
                v = amp * std::exp(-0.5 * xi * xi);
            } else if (j == 1) {
                v = std::sqrt(2.0) * xi * prev[i];
            } else {
                v = std::sqrt(2.0 / j) * xi * cur[i] - std::sqrt((j - 1.0) / j) * prev[i];
            }
            out[i] = v;
        }
        if (j >= 1) prev = cur;
        for (int i = 0; i < n; ++i) cur[i] = out[i];
        if (j == 0) prev = cur;

        double nrm2 = 0;
        for (int i = 0; i < n; ++i) nrm2 += out[i] * out[i];
        nrm2 *= dx;
        if (std::abs(std::sqrt(nrm2) - 1.0) > 1e-8)
            throw ConfigError("reference basis: state " + std::to_string(j)
                              + " not resolvable on this grid (norm "
                              + std::to_string(std::sqrt(nrm2)) + ")");
        const double inv = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < n; ++i) out[i] *= inv;
    }
    return cols;
}

} // namespace

ReferenceBasis build_reference_basis(const Grid& grid, double nu, int m_states) {
    grid.validate();
    if (m_states < 1) throw ConfigError("reference basis: size must be at least 1");
    if (m_states > grid.n / 8)
        throw ConfigError("reference basis: size " + std::to_string(m_states)
                          + " exceeds n_points/8 truncation sanity bound");
    ReferenceBasis b;
    b.grid = grid;
    b.nu = nu;
    b.size = m_states;
    b.columns = recurrence_columns(grid, nu, m_states);
    return b;
}

WaveState reference_eigenstate(const Grid& grid, double nu, int n) {
    if (n < 0) throw ConfigError("reference_eigenstate: negative order");
    const auto cols = recurrence_columns(grid, nu, n + 1);
    WaveState st;
    st.grid = grid;
    st.psi.resize(grid.n);
    const double* c = cols.data() + static_cast<std::size_t>(n) * grid.n;
    for (int i = 0; i < grid.n; ++i) st.psi[i] = c[i];
    return st;
}

} // namespace paulloc
