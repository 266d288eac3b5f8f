#include "rogers/phi_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rogers {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

size_t find_cell(const std::vector<PhiProfile::Cell>& cells, double s) {
    auto it = std::upper_bound(cells.begin(), cells.end(), s,
                               [](double v, const PhiProfile::Cell& c) { return v < c.s1; });
    return it == cells.begin() ? 0 : static_cast<size_t>(it - cells.begin()) - 1;
}

double interp(const PhiProfile::Cell& c, double s) {
    if (c.phi1 == c.phi2) return c.phi1;
    return c.phi1 + (c.phi2 - c.phi1) * (s - c.s1) / (c.s2 - c.s1);
}

// log((Z + d) / Z) continued along the segment, with Z = zeta + s1.
cplx seg_log(cplx Z, double d) {
    bool on_axis = Z.imag() == 0.0;
    if (on_axis && Z.real() < 0.0 && Z.real() + d > 0.0) {
        // the segment passes through the origin; take the limit from the
        // side indicated by the sign of the zero imaginary part
        return std::log(Z + d) - std::log(Z);
    }
    return log1p_c(cplx(d) / Z);
}

}  // namespace

double PhiProfile::at(double s) const {
    if (cells.empty() || s >= cells.back().s2) return phi_hi;
    return interp(cells[find_cell(cells, s)], s);
}

double PhiProfile::right(double s) const { return at(s); }

double PhiProfile::left(double s) const {
    if (cells.empty()) return phi_hi;
    if (s > cells.back().s2) return phi_hi;
    size_t k = find_cell(cells, s);
    if (k > 0 && s == cells[k].s1) return cells[k - 1].phi2;
    return interp(cells[k], s);
}

cplx PhiProfile::integral(cplx zeta) const {
    cplx total = 0;
    for (const Cell& c : cells) {
        if (c.phi1 == 0.0 && c.phi2 == 0.0) continue;
        double d = c.s2 - c.s1;
        double A = 1.0 + c.s1;
        cplx Z = zeta + c.s1;
        double L1 = std::log1p(d / A);
        bool zero = Z == cplx(0.0);
        cplx L2 = zero ? cplx(kInf) : seg_log(Z, d);
        if (c.phi1 != 0.0) {
            if (zero) return cplx(-kInf);
            total += c.phi1 * (L1 - L2);
        }
        if (c.phi2 != c.phi1) {
            double B = (c.phi2 - c.phi1) / d;
            cplx ZL2 = zero ? cplx(0.0) : Z * L2;
            total += B * (ZL2 - A * L1);
        }
    }
    if (phi_hi != 0.0) {
        double sN = cells.empty() ? 0.0 : cells.back().s2;
        if (sN == 0.0) {
            // phi constant on all of (0, inf): exponent phi_hi * log(zeta)
            total += phi_hi * std::log(zeta);
        } else {
            total += phi_hi * log1p_c((zeta - 1.0) / (1.0 + sN));
        }
    }
    return total;
}

double PhiProfile::integral_at_zero() const { return integral(cplx(0.0)).real(); }

double PhiProfile::integral_at_infinity() const {
    if (phi_hi > 0) return kInf;
    double total = 0;
    for (const Cell& c : cells) {
        double d = c.s2 - c.s1;
        double A = 1.0 + c.s1;
        double L1 = std::log1p(d / A);
        total += c.phi1 * L1;
        if (c.phi2 != c.phi1) total += (c.phi2 - c.phi1) / d * (d - A * L1);
    }
    return total;
}

void PhiProfile::compress(double tol) {
    std::vector<Cell> out;
    for (const Cell& c : cells) {
        if (!out.empty()) {
            Cell& b = out.back();
            bool const_b = std::abs(b.phi2 - b.phi1) <= tol;
            bool const_c = std::abs(c.phi2 - c.phi1) <= tol;
            if (const_b && const_c && std::abs(c.phi1 - b.phi1) <= tol &&
                std::abs(c.phi2 - b.phi1) <= tol && std::abs(b.phi2 - c.phi1) <= tol) {
                b.s2 = c.s2;
                b.phi2 = b.phi1;
                continue;
            }
        }
        out.push_back(c);
    }
    cells.swap(out);
}

PhiProfile profile_from_table(const PhiTable& t, int sign) {
    PhiProfile p;
    std::vector<double> nodes;
    for (double b : t.breakpoints) {
        double s = sign * b;
        if (s > 0) nodes.push_back(s);
    }
    std::sort(nodes.begin(), nodes.end());
    auto phi_l = [&](double s) { return sign > 0 ? t.left(s) : t.right(-s); };
    auto phi_r = [&](double s) { return sign > 0 ? t.right(s) : t.left(-s); };
    if (nodes.empty()) {
        p.phi_hi = phi_r(1.0);
        return p;
    }
    // first cell from 0: the table may be linear across the origin
    double s0 = nodes.front();
    double at0 = t.interpolation == Interpolation::piecewise_linear ? t(0.0) : phi_r(0.5 * s0);
    p.cells.push_back({0.0, s0, at0, phi_l(s0)});
    for (size_t k = 0; k + 1 < nodes.size(); ++k) {
        double a = nodes[k], b = nodes[k + 1];
        p.cells.push_back({a, b, phi_r(a), phi_l(b)});
    }
    p.phi_hi = phi_r(nodes.back());
    return p;
}

}  // namespace rogers
