#include "rogers/spine.hpp"

#include "rogers/errors.hpp"
#include "rogers/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

namespace rogers {

namespace {

constexpr double kEdge = 1e-9;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double arg_on_ray(const RogersFn& f, double r, double alpha) {
    return std::arg(f.eval(std::polar(r, alpha)));
}

bool in_z(double theta) { return std::abs(theta) < kPi / 2 - kZAngleTol; }

// boundary value f(+0 + i y); the ladder fallback sets the flag
double axis_value(const RogersFn& f, double y, bool& interpolated) {
    interpolated = false;
    try {
        cplx v = f.eval_axis(y);
        if (finite(v)) return v.real();
    } catch (const DomainError&) {
    }
    interpolated = true;
    double r = std::abs(y);
    std::vector<double> h, vals;
    for (double e : {1e-4 * r, 1e-5 * r, 1e-6 * r}) {
        cplx v = f.eval(cplx(e, y));
        if (!finite(v)) continue;
        h.push_back(e);
        vals.push_back(v.real());
    }
    if (h.empty()) throw EstimationError("profile value at the axis could not be evaluated");
    return extrapolate_to_zero(h, vals);
}

}  // namespace

const char* region_name(Region r) {
    switch (r) {
        case Region::D_plus: return "D_plus";
        case Region::D_minus: return "D_minus";
        default: return "on_spine";
    }
}

bool is_constant(const RogersFn& f) {
    cplx v0 = f.eval(cplx(1.0, 0.0));
    for (cplx z : {cplx(0.37, 0.0), cplx(3.1, 0.0), cplx(1.0, 2.0), cplx(2.0, -5.0), cplx(41.0, 0.3)}) {
        cplx v = f.eval(z);
        if (std::abs(v - v0) > 1e-14 * (std::abs(v0) + 1e-300)) return false;
    }
    return true;
}

double theta_at(const RogersFn& f, double r, double angle_tol) {
    if (!(r > 0) || !std::isfinite(r)) throw DomainError("spine radius must be positive", "r");
    if (!(angle_tol > 0)) throw ArgumentError("angle_tol must be positive", "angle_tol");
    if (is_constant(f)) throw SpineUndefined("f is constant; the spine is undefined");
    double lo = -kPi / 2 + kEdge, hi = kPi / 2 - kEdge;
    double a = root_monotone([&](double al) { return arg_on_ray(f, r, al); }, lo, hi, angle_tol);
    if (a <= lo) return -kPi / 2;
    if (a >= hi) return kPi / 2;
    return a;
}

double theta_at(const RogersSpec& spec, double r, double angle_tol) {
    return theta_at(*make_fn(spec), r, angle_tol);
}

SpinePoint spine_point(const RogersFn& f, double r) {
    SpinePoint p;
    p.r = r;
    p.theta = theta_at(f, r);
    p.in_Z = in_z(p.theta);
    if (std::abs(p.theta) < kPi / 2) {
        p.zeta = std::polar(r, p.theta);
        p.lambda = f.eval(p.zeta).real();
    } else {
        double y = p.theta > 0 ? r : -r;
        p.zeta = cplx(0.0, y);
        p.lambda = axis_value(f, y, p.boundary_interpolated);
    }
    return p;
}

double lambda_at(const RogersFn& f, double r) { return spine_point(f, r).lambda; }
double lambda_at(const RogersSpec& spec, double r) { return lambda_at(*make_fn(spec), r); }

namespace {

// Boundary radius of Z between a and b, where in_Z differs at the two ends.
double locate_boundary(const RogersFn& f, double a, double b) {
    bool za = in_z(theta_at(f, a));
    double la = std::log(a), lb = std::log(b);
    while (lb - la > 1e-14) {
        double m = 0.5 * (la + lb);
        if (in_z(theta_at(f, std::exp(m))) == za)
            la = m;
        else
            lb = m;
    }
    return std::exp(0.5 * (la + lb));
}

// off-Z side switch between the two half-axes
double locate_flip(const RogersFn& f, double a, double b) {
    double la = std::log(a), lb = std::log(b);
    bool pa = theta_at(f, a) > 0;
    while (lb - la > 1e-14) {
        double m = 0.5 * (la + lb);
        double t = theta_at(f, std::exp(m));
        if (in_z(t)) return std::exp(m);
        if ((t > 0) == pa)
            la = m;
        else
            lb = m;
    }
    return std::exp(0.5 * (la + lb));
}

struct Transitions {
    std::vector<double> boundaries;
    std::vector<double> flips;
};

Transitions scan_transitions(const RogersFn& f, std::vector<double> grid) {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    Transitions t;
    double prev = theta_at(f, grid[0]);
    for (size_t k = 1; k < grid.size(); ++k) {
        double cur = theta_at(f, grid[k]);
        bool zp = in_z(prev), zc = in_z(cur);
        if (zp != zc)
            t.boundaries.push_back(locate_boundary(f, grid[k - 1], grid[k]));
        else if (!zp && (prev > 0) != (cur > 0))
            t.flips.push_back(locate_flip(f, grid[k - 1], grid[k]));
        prev = cur;
    }
    return t;
}

}  // namespace

SpineTable build_spine_table(const RogersFn& f, double r_min, double r_max, int n) {
    if (!(r_min > 0) || !(r_max > r_min)) throw ArgumentError("need 0 < r_min < r_max", "r_min");
    if (n < 16) throw ArgumentError("spine table needs n >= 16", "n");
    SpineTable t;
    t.r_min = r_min;
    t.r_max = r_max;
    t.n = n;
    double l0 = std::log(r_min), l1 = std::log(r_max);
    for (int k = 0; k < n; ++k) {
        double r = k == 0 ? r_min : k == n - 1 ? r_max : std::exp(l0 + (l1 - l0) * k / (n - 1));
        t.points.push_back(spine_point(f, r));
    }
    double start = t.points[0].in_Z ? r_min : 0;
    for (int k = 1; k < n; ++k) {
        const auto& a = t.points[k - 1];
        const auto& b = t.points[k];
        if (a.in_Z == b.in_Z) continue;
        double rb = locate_boundary(f, a.r, b.r);
        double lin = lambda_at(f, b.in_Z ? rb * (1 + 1e-9) : rb * (1 - 1e-9));
        double lout = lambda_at(f, b.in_Z ? rb * (1 - 1e-9) : rb * (1 + 1e-9));
        t.boundary_mismatch.push_back(std::abs(lin - lout) / std::max(std::abs(lin), 1e-300));
        if (b.in_Z)
            start = rb;
        else
            t.z_intervals.emplace_back(start, rb);
    }
    if (t.points.back().in_Z) t.z_intervals.emplace_back(start, r_max);
    return t;
}

SpineTable build_spine_table(const RogersSpec& spec, double r_min, double r_max, int n) {
    return build_spine_table(*make_fn(spec), r_min, r_max, n);
}

Region classify_point(const RogersFn& f, cplx xi) {
    if (xi == cplx(0.0)) throw DomainError("classification at the origin", "xi");
    if (xi.real() != 0) {
        // D+ and D- are symmetric under xi -> -conj(xi); classify the right-half representative
        cplx z = xi.real() < 0 ? cplx(-xi.real(), xi.imag()) : xi;
        cplx v = f.eval(z);
        if (std::abs(v.imag()) <= 1e-10 * (1 + std::abs(v))) return Region::on_spine;
        return v.imag() > 0 ? Region::D_plus : Region::D_minus;
    }
    double y = xi.imag(), r = std::abs(y);
    double side = y > 0 ? kPi / 2 : -kPi / 2;
    auto on_axis = [&](double rr) { return theta_at(f, rr) == side; };
    if (!on_axis(r)) return y > 0 ? Region::D_plus : Region::D_minus;
    if (on_axis(r * (1 - 1e-6)) && on_axis(r * (1 + 1e-6))) return y > 0 ? Region::D_minus : Region::D_plus;
    return Region::on_spine;
}

Region classify_point(const RogersSpec& spec, cplx xi) { return classify_point(*make_fn(spec), xi); }

VerifyReport spine_invariant_report(const SpineTable& table, const RogersFn& f,
                                    std::optional<double> exp_constant) {
    VerifyReport rep;
    rep.suite = "spine_invariants";
    const auto& p = table.points;
    size_t n = p.size();
    if (n < 64) {
        rep.record("table_size", 0.0, -1, "invariant report needs at least 64 points");
        return rep;
    }
    std::vector<double> R(n), Th(n);
    for (size_t k = 0; k < n; ++k) {
        R[k] = std::log(p[k].r);
        Th[k] = p[k].theta;
    }
    const double slack = 1.1;

    // (i) curvature of Theta in the log variable
    for (size_t k = 1; k + 1 < n; ++k) {
        if (!(p[k - 1].in_Z && p[k].in_Z && p[k + 1].in_Z)) continue;
        double h1 = R[k] - R[k - 1], h2 = R[k + 1] - R[k];
        double d1 = (Th[k + 1] - Th[k - 1]) / (h1 + h2);
        double d2 = 2 * ((Th[k + 1] - Th[k]) / h2 - (Th[k] - Th[k - 1]) / h1) / (h1 + h2);
        double bound = slack * 9 * (d1 * d1 + 1) / std::cos(Th[k]);
        rep.record("curvature", p[k].zeta, (bound - std::abs(d2)) / bound);
    }

    // (ii) spine length inside each annulus [r, 2r]
    for (size_t k = 0; k < n; ++k) {
        if (p[k].r * 2 > table.r_max) break;
        double len = 0;
        for (size_t j = k; j + 1 < n && p[j + 1].r <= 2 * p[k].r; ++j)
            if (p[j].in_Z && p[j + 1].in_Z) len += std::abs(p[j + 1].zeta - p[j].zeta);
        double cap = 300 * p[k].r;
        rep.record("annulus_length", p[k].r, (cap - len) / cap);
    }

    // (iii) oscillation of Theta over windows of width log(1 + sqrt 2)
    const double h = std::log(1 + std::sqrt(2.0));
    for (size_t k = 0; k < n; ++k) {
        if (R[k] + h > R[n - 1]) break;
        double tv = 0;
        for (size_t j = k; j + 1 < n && R[j + 1] <= R[k] + h; ++j)
            if (p[j].in_Z && p[j + 1].in_Z) tv += std::abs(Th[j + 1] - Th[j]);
        rep.record("theta_variation", p[k].r, (140 - tv) / 140);
    }

    // (iv) monotone profile
    for (size_t k = 0; k + 1 < n; ++k) {
        double scale = std::max(std::abs(p[k + 1].lambda), 1e-300);
        rep.record("lambda_monotone", p[k + 1].r, (p[k + 1].lambda - p[k].lambda) / scale + 1e-12);
    }

    // (v) logarithmic derivative along the spine
    for (size_t k = 0; k < n; ++k) {
        if (!p[k].in_Z) continue;
        cplx z = p[k].zeta;
        double hh = 1e-6 * std::abs(z);
        if (hh >= z.real()) hh = 0.5 * z.real();
        cplx d = central_difference([&](cplx w) { return f.eval(w); }, z, hh);
        double lhs = std::abs(d / f.eval(z));
        double bound = slack * kPi / std::abs(z);
        rep.record("log_derivative", z, (bound - lhs) / bound);
    }

    // (vi) size of the profile against the exponential-representation constant
    if (exp_constant) {
        double lc = std::abs(std::log(*exp_constant));
        for (size_t k = 0; k < n; ++k) {
            double r = p[k].r;
            double bound = lc + std::sqrt(2 * kPi) * (1 + r) / std::sqrt(r) + 1e-6;
            double v = std::abs(std::log(p[k].lambda));
            rep.record("log_lambda", r, (bound - v) / bound);
        }
    }
    return rep;
}

VerifyReport spine_invariant_report(const SpineTable& table, const RogersSpec& spec) {
    auto f = make_fn(spec);
    return spine_invariant_report(table, *f, f->exp_constant());
}

// ---------------------------------------------------------------------------
// Stieltjes measure on the profile

cplx StieltjesNodes::sum(cplx tau) const { return kernels::stieltjes_sum(a.data(), lam.data(), a.size(), tau); }

namespace {

constexpr int kN = 24;

struct Cheb {
    std::array<double, kN> t;   // nodes on [-1, 1]
    std::array<double, kN> w;   // Fejer weights
    std::array<std::array<double, kN>, kN> cosm;  // cos(j * theta_k)
    Cheb() {
        for (int k = 0; k < kN; ++k) {
            double th = kPi * (2 * k + 1) / (2.0 * kN);
            t[k] = std::cos(th);
            double s = 0;
            for (int j = 1; j <= kN / 2; ++j) s += std::cos(2 * j * th) / (4.0 * j * j - 1);
            w[k] = 2.0 / kN * (1 - 2 * s);
            for (int j = 0; j < kN; ++j) cosm[j][k] = std::cos(j * th);
        }
    }
    std::array<double, kN> coeffs(const std::array<double, kN>& v) const {
        std::array<double, kN> c{};
        for (int j = 0; j < kN; ++j) {
            double s = 0;
            for (int k = 0; k < kN; ++k) s += v[k] * cosm[j][k];
            c[j] = 2.0 / kN * s;
        }
        c[0] *= 0.5;
        return c;
    }
    // derivative of the interpolant at the nodes
    std::array<double, kN> deriv(const std::array<double, kN>& c) const {
        std::array<double, kN + 1> d{};
        for (int j = kN - 1; j >= 1; --j) d[j - 1] = d[j + 1] + 2 * j * c[j];
        d[0] *= 0.5;
        std::array<double, kN> out{};
        for (int k = 0; k < kN; ++k) {
            double s = 0;
            for (int j = 0; j < kN - 1; ++j) s += d[j] * cosm[j][k];
            out[k] = s;
        }
        return out;
    }
    static double tail(const std::array<double, kN>& c) {
        return std::max({std::abs(c[kN - 1]), std::abs(c[kN - 2]), std::abs(c[kN - 3])});
    }
};

const Cheb& cheb() {
    static const Cheb c;
    return c;
}

struct Piece {
    double anchor, H, dir;
    int power;
    double v0, v1;
    int depth;
};

}  // namespace

SpineMeasure::SpineMeasure(FnPtr f) : f_(std::move(f)) {
    if (is_constant(*f_)) throw SpineUndefined("f is constant; the spine is undefined");
    double smin = 1, smax = 1;
    std::vector<double> hints;
    for (double h : f_->phi_hints())
        if (h != 0 && std::isfinite(h)) {
            hints.push_back(std::abs(h));
            smin = std::min(smin, std::abs(h));
            smax = std::max(smax, std::abs(h));
        }
    r_lo_ = 1e-10 * smin;
    r_hi_ = 1e10 * smax;
    // push the ends out until the profile has settled at its limits
    auto lim = f_->limits();
    double l_mid = lambda_at(*f_, std::sqrt(smin * smax));
    if (!lim.zero_infinite) {
        double tol0 = 1e-13 * (lim.f_at_zero + l_mid);
        while (r_lo_ > 1e-250 && lambda_at(*f_, r_lo_) - lim.f_at_zero > tol0) r_lo_ *= 1e-5;
    }
    if (lim.infinity_infinite) {
        while (r_hi_ < 1e250 && lambda_at(*f_, r_hi_) < 1e13 * l_mid) r_hi_ *= 1e5;
    } else {
        double tol1 = 1e-13 * lim.f_at_infinity;
        while (r_hi_ < 1e250 && lim.f_at_infinity - lambda_at(*f_, r_hi_) > tol1) r_hi_ *= 1e5;
    }
    double l0 = std::log10(r_lo_), l1 = std::log10(r_hi_);
    std::vector<double> grid;
    int m = static_cast<int>(std::ceil((l1 - l0) * 64));
    for (int k = 0; k <= m; ++k) grid.push_back(std::pow(10.0, l0 + (l1 - l0) * k / m));
    for (double h : hints)
        for (int k = -200; k <= 200; ++k) {
            double r = h * std::pow(3.0, k / 200.0);
            if (r > r_lo_ && r < r_hi_) grid.push_back(r);
        }
    auto tr = scan_transitions(*f_, grid);
    boundaries_ = tr.boundaries;
    flips_ = tr.flips;
}

const SpinePoint& SpineMeasure::point(double r) {
    auto it = cache_.find(r);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(r, spine_point(*f_, r)).first->second;
}

StieltjesNodes SpineMeasure::discretize(const std::function<double(const SpinePoint&)>& g,
                                        std::vector<double> splits, double tol) {
    const Cheb& C = cheb();
    std::vector<std::pair<double, bool>> br;  // (log r, graded)
    br.emplace_back(std::log(r_lo_), false);
    br.emplace_back(std::log(r_hi_), false);
    for (double b : boundaries_) br.emplace_back(std::log(b), true);
    for (double b : flips_) br.emplace_back(std::log(b), false);
    for (double s : splits)
        if (s > r_lo_ && s < r_hi_) br.emplace_back(std::log(s), false);
    std::sort(br.begin(), br.end());
    std::vector<std::pair<double, bool>> u;
    for (const auto& b : br) {
        if (!u.empty() && b.first - u.back().first < 1e-13) {
            u.back().second = u.back().second || b.second;
            continue;
        }
        u.push_back(b);
    }

    std::vector<Piece> stack;
    for (size_t k = 0; k + 1 < u.size(); ++k) {
        double a = u[k].first, b = u[k + 1].first;
        bool ga = u[k].second, gb = u[k + 1].second;
        if (ga && gb) {
            double mid = 0.5 * (a + b);
            stack.push_back({a, mid - a, 1, 2, 0, 1, 0});
            stack.push_back({b, b - mid, -1, 2, 0, 1, 0});
        } else if (ga) {
            stack.push_back({a, b - a, 1, 2, 0, 1, 0});
        } else if (gb) {
            stack.push_back({b, b - a, -1, 2, 0, 1, 0});
        } else {
            stack.push_back({a, b - a, 1, 1, 0, 1, 0});
        }
    }

    StieltjesNodes out;
    while (!stack.empty()) {
        Piece pc = stack.back();
        stack.pop_back();
        std::array<double, kN> L{}, G{}, lam{};
        double vm = 0.5 * (pc.v0 + pc.v1), vh = 0.5 * (pc.v1 - pc.v0);
        for (int k = 0; k < kN; ++k) {
            double v = vm + vh * C.t[k];
            double uu = pc.anchor + pc.dir * pc.H * (pc.power == 2 ? v * v : v);
            const SpinePoint& sp = point(std::exp(uu));
            lam[k] = sp.lambda;
            L[k] = std::log(sp.lambda);
            G[k] = g(sp);
        }
        auto cL = C.coeffs(L);
        auto cG = C.coeffs(G);
        double dL = *std::max_element(L.begin(), L.end()) - *std::min_element(L.begin(), L.end());
        double gmax = 0;
        for (double v : G) gmax = std::max(gmax, std::abs(v));
        double est = Cheb::tail(cG) * dL + 2 * gmax * Cheb::tail(cL);
        double du = pc.H * (pc.power == 2 ? pc.v1 * pc.v1 - pc.v0 * pc.v0 : pc.v1 - pc.v0);
        double lmax = std::max(std::abs(L.front()), std::abs(L.back()));
        double noise = 64 * std::numeric_limits<double>::epsilon() * gmax * (1 + lmax);
        // the weight lambda / (tau + lambda) turns over on a unit scale in log lambda
        bool ok = (est <= std::max(tol, noise) && dL <= 2.0) || du < 1e-12;
        if (!ok && pc.depth < 60) {
            stack.push_back({pc.anchor, pc.H, pc.dir, pc.power, pc.v0, vm, pc.depth + 1});
            stack.push_back({pc.anchor, pc.H, pc.dir, pc.power, vm, pc.v1, pc.depth + 1});
            continue;
        }
        auto dLdt = C.deriv(cL);
        for (int k = 0; k < kN; ++k) {
            out.lam.push_back(lam[k]);
            out.a.push_back(pc.dir * C.w[k] * G[k] * lam[k] * dLdt[k]);
        }
    }
    return out;
}

}  // namespace rogers
