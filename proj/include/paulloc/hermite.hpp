#pragma once

#include <vector>

#include "paulloc/grid.hpp"
#include "paulloc/quantum.hpp"

namespace paulloc {

// Eigenbasis of the stationary reference oscillator p^2/2 + nu^2 x^2 / 2
// (momentum operator scaled by kbar), evaluated on the grid.  Functions are
// generated by the normalized three-term recurrence, which stays O(1) in
// magnitude for any order, and each column is renormalized on the grid.
struct ReferenceBasis {
    Grid grid;
    double nu = 0.0;
    int size = 0;                 // number of states M
    std::vector<double> columns;  // column-major, columns[j * grid.n + i]

    const double* col(int j) const { return columns.data() + static_cast<std::size_t>(j) * grid.n; }
};

// Throws ConfigError when M > n/8 (truncation sanity) or when a state of the
// requested order is not resolvable on the grid (grid-norm deviates by more
// than 1e-8 from 1 before renormalization).
ReferenceBasis build_reference_basis(const Grid& grid, double nu, int m_states);

// Single eigenstate as a WaveState (order n < grid-resolvable limit).
WaveState reference_eigenstate(const Grid& grid, double nu, int n);

} // namespace paulloc
