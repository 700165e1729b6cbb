// Dense complex linear solver for the small systems arising in the series
// recursions (typically under 40 unknowns).
//
// Gaussian elimination with full column scan for the pivot.  Rectangular
// systems are allowed: extra equations must be consistent within a tolerance
// (they arise because one unknown's image can touch several residual slots),
// and a pivot falling below the relative threshold signals an exponent
// resonance.

#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "pvi/errors.hpp"
#include "pvi/scalar.hpp"

namespace pvi {

template <class C>
struct LinearSolveResult {
    std::vector<C> x;
    double minPivot = 0.0;   // smallest pivot magnitude relative to the matrix scale
    double residual = 0.0;   // max inconsistency of the eliminated zero rows
};

// Solve A x = b in the least-structured sense: eliminate with partial
// pivoting; if rows remain without pivots they must be (numerically) zero on
// both sides.  Throws ResonanceError when a needed pivot is below
// pivotTol * scale, and reports the worst inconsistency found.
template <class C>
LinearSolveResult<C> solveDense(std::vector<std::vector<C>> a,
                                std::vector<C> b,
                                double pivotTol = 1e-9,
                                const std::string& what = "linear system") {
    const int rows = static_cast<int>(a.size());
    const int cols = rows > 0 ? static_cast<int>(a[0].size()) : 0;

    double scale = 0.0;
    for (const auto& row : a)
        for (const auto& v : row) scale = std::max(scale, absAsDouble(v));
    if (scale == 0.0) scale = 1.0;

    std::vector<int> pivotRowOfCol(cols, -1);
    int rank = 0;
    double minPivot = std::numeric_limits<double>::infinity();

    for (int col = 0; col < cols && rank < rows; ++col) {
        int best = -1;
        double bestMag = 0.0;
        for (int r = rank; r < rows; ++r) {
            const double mag = absAsDouble(a[r][col]);
            if (mag > bestMag) { bestMag = mag; best = r; }
        }
        if (best < 0 || bestMag < pivotTol * scale) {
            // No usable pivot in this column: the unknown would be
            // undetermined.  In our recursions every unknown must be pinned,
            // so this is a resonance.
            throw ResonanceError(what + ": pivot " + std::to_string(bestMag) +
                                 " below threshold (column " + std::to_string(col) + ")");
        }
        std::swap(a[rank], a[best]);
        std::swap(b[rank], b[best]);
        minPivot = std::min(minPivot, bestMag / scale);
        const C inv = C(1) / a[rank][col];
        for (int r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const C f = a[r][col] * inv;
            if (absAsDouble(f) == 0.0) continue;
            for (int c2 = col; c2 < cols; ++c2) a[r][c2] -= f * a[rank][c2];
            b[r] -= f * b[rank];
        }
        pivotRowOfCol[col] = rank;
        ++rank;
    }

    double inconsistency = 0.0;
    for (int r = rank; r < rows; ++r) inconsistency = std::max(inconsistency, absAsDouble(b[r]));

    LinearSolveResult<C> out;
    out.x.assign(cols, C(0));
    for (int col = 0; col < cols; ++col) {
        const int r = pivotRowOfCol[col];
        if (r < 0)
            throw ResonanceError(what + ": undetermined unknown (column " + std::to_string(col) + ")");
        out.x[col] = b[r] / a[r][col];
    }
    out.minPivot = (rank > 0) ? minPivot : 0.0;
    out.residual = inconsistency;
    return out;
}

} // namespace pvi
