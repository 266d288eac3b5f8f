#pragma once

#include "rogers/numerics.hpp"
#include "rogers/spec.hpp"

#include <vector>

namespace rogers {

// Boundary angle restricted to one half-line, as a contiguous run of cells
// starting at s = 0, linear inside each cell (jumps allowed between cells),
// constant beyond the last cell.
struct PhiProfile {
    struct Cell {
        double s1, s2, phi1, phi2;
    };
    std::vector<Cell> cells;
    double phi_hi = 0;

    double at(double s) const;
    double left(double s) const;
    double right(double s) const;

    // int_0^inf phi(s) (1/(1+s) - 1/(zeta+s)) ds, exact for the piecewise
    // linear profile. zeta = 0 and zeta = inf give the limits (possibly -inf
    // or +inf). Signed zeros in Im zeta select the side of the cut.
    cplx integral(cplx zeta) const;
    double integral_at_zero() const;
    double integral_at_infinity() const;

    // merge adjacent cells that are constant at the same value
    void compress(double tol);
};

PhiProfile profile_from_table(const PhiTable& t, int sign);

}  // namespace rogers
