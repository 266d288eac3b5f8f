#include "rogers/numerics.hpp"

#include "rogers/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/tools/toms748_solve.hpp>

namespace rogers {

namespace {

// Gauss-Kronrod 7-15 on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Compact variable u on [u0, u1] -> physical s, with Jacobian.
struct Outer {
    Domain::Kind kind;
    double a;

    double s(double u) const {
        switch (kind) {
            case Domain::Kind::full_line: return std::tan(u);
            case Domain::Kind::half_line: return a + u / (1.0 - u);
            default: return u;
        }
    }
    double jac(double u) const {
        switch (kind) {
            case Domain::Kind::full_line: {
                double c = std::cos(u);
                return 1.0 / (c * c);
            }
            case Domain::Kind::half_line: {
                double d = 1.0 - u;
                return 1.0 / (d * d);
            }
            default: return 1.0;
        }
    }
    double u_of(double s) const {
        switch (kind) {
            case Domain::Kind::full_line: return std::atan(s);
            case Domain::Kind::half_line: {
                double t = s - a;
                return t / (1.0 + t);
            }
            default: return s;
        }
    }
};

// Half of a base panel in u-space; v in [0, 1] maps to u = anchor + dir*h*v^2,
// which absorbs inverse-square-root behaviour at the anchor.
struct Half {
    double anchor;
    double h;
    int dir;
};

struct Seg {
    int half;
    double v0, v1;
    cplx val;
    double err;
    double resabs;
    bool operator<(const Seg& o) const { return err < o.err; }
};

}  // namespace

QuadResult integrate_adaptive(const std::function<cplx(double)>& f, const Domain& dom,
                              const QuadratureConfig& cfg) {
    if (!(cfg.rel_tol > 0) || cfg.abs_tol < 0 || cfg.max_subdivisions < 1)
        throw ArgumentError("invalid quadrature configuration", "cfg");
    for (size_t i = 1; i < cfg.singular_points.size(); ++i)
        if (!(cfg.singular_points[i] > cfg.singular_points[i - 1]))
            throw ArgumentError("singular points must be strictly increasing", "singular_points");
    if (dom.kind == Domain::Kind::finite && !(dom.b > dom.a))
        throw ArgumentError("empty integration range", "domain");

    Outer outer{dom.kind, dom.a};
    double u0 = 0, u1 = 0;
    switch (dom.kind) {
        case Domain::Kind::full_line: u0 = -kPi / 2; u1 = kPi / 2; break;
        case Domain::Kind::half_line: u0 = 0; u1 = 1; break;
        case Domain::Kind::finite: u0 = dom.a; u1 = dom.b; break;
    }

    std::vector<double> cuts{u0};
    for (double p : cfg.singular_points) {
        double lo = dom.kind == Domain::Kind::finite ? dom.a : (dom.kind == Domain::Kind::half_line ? dom.a : -HUGE_VAL);
        double hi = dom.kind == Domain::Kind::finite ? dom.b : HUGE_VAL;
        if (p > lo && p < hi) {
            double u = outer.u_of(p);
            if (u > cuts.back() && u < u1) cuts.push_back(u);
        }
    }
    cuts.push_back(u1);

    std::vector<Half> halves;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double h = 0.5 * (cuts[i + 1] - cuts[i]);
        halves.push_back({cuts[i], h, +1});
        halves.push_back({cuts[i + 1], h, -1});
    }

    auto eval_seg = [&](int hi, double v0, double v1) {
        const Half& H = halves[hi];
        double c = 0.5 * (v0 + v1), r = 0.5 * (v1 - v0);
        auto g = [&](double v) -> cplx {
            double u = H.anchor + H.dir * H.h * v * v;
            double j = 2.0 * H.h * v * outer.jac(u);
            if (j == 0.0 || !std::isfinite(j)) return 0.0;
            cplx y = f(outer.s(u));
            return y * j;
        };
        cplx fc = g(c);
        cplx rk = fc * kWgk[7];
        cplx rg = fc * kWg[3];
        double ra = std::abs(fc) * kWgk[7];
        for (int k = 0; k < 7; ++k) {
            cplx f1 = g(c - r * kXgk[k]);
            cplx f2 = g(c + r * kXgk[k]);
            rk += (f1 + f2) * kWgk[k];
            ra += (std::abs(f1) + std::abs(f2)) * kWgk[k];
            if (k % 2 == 1) rg += (f1 + f2) * kWg[k / 2];
        }
        Seg s{hi, v0, v1, rk * r, std::abs((rk - rg) * r), ra * std::abs(r)};
        if (!std::isfinite(s.val.real()) || !std::isfinite(s.val.imag())) {
            s.err = HUGE_VAL;
        }
        return s;
    };

    std::priority_queue<Seg> pq;
    cplx total = 0;
    double err = 0, resabs = 0;
    for (int i = 0; i < static_cast<int>(halves.size()); ++i) {
        Seg s = eval_seg(i, 0.0, 1.0);
        total += s.val;
        err += s.err;
        resabs += s.resabs;
        pq.push(s);
    }

    const double eps = std::numeric_limits<double>::epsilon();
    int subdiv = 0;
    auto done = [&] {
        double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        return err <= target || err <= 50 * eps * resabs;
    };
    while (!done()) {
        if (subdiv >= cfg.max_subdivisions) {
            throw ConvergenceError("adaptive quadrature did not converge", total, err);
        }
        Seg s = pq.top();
        pq.pop();
        double vm = 0.5 * (s.v0 + s.v1);
        if (!(vm > s.v0 && vm < s.v1)) {
            throw ConvergenceError("quadrature interval underflow", total, err);
        }
        Seg a = eval_seg(s.half, s.v0, vm);
        Seg b = eval_seg(s.half, vm, s.v1);
        total += a.val + b.val - s.val;
        err += a.err + b.err - s.err;
        resabs += a.resabs + b.resabs - s.resabs;
        pq.push(a);
        pq.push(b);
        ++subdiv;
        if (subdiv % 64 == 0) {
            // resum to keep running totals from drifting
            auto copy = pq;
            total = 0;
            err = 0;
            resabs = 0;
            while (!copy.empty()) {
                total += copy.top().val;
                err += copy.top().err;
                resabs += copy.top().resabs;
                copy.pop();
            }
        }
    }
    return {total, err, subdiv};
}

double bisect_monotone(const std::function<double(double)>& g, double lo, double hi,
                       double tol) {
    if (!(lo < hi)) throw ArgumentError("bisection requires lo < hi", "lo");
    double glo = g(lo);
    if (glo > 0) return lo;
    if (glo == 0) return lo;
    double ghi = g(hi);
    if (ghi < 0) return hi;
    if (ghi == 0) return hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        double gm = g(mid);
        if (gm == 0) return mid;
        if (gm < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double root_monotone(const std::function<double(double)>& g, double lo, double hi,
                     double tol) {
    if (!(lo < hi)) throw ArgumentError("root search requires lo < hi", "lo");
    double glo = g(lo);
    if (glo >= 0) return lo;
    double ghi = g(hi);
    if (ghi <= 0) return hi;
    auto term = [tol](double a, double b) { return std::abs(b - a) <= tol; };
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, term, iters);
    return 0.5 * (r.first + r.second);
}

cplx principal_log(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("logarithm of a non-finite value");
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw DomainError("logarithm on the closed negative real axis");
    return std::log(z);
}

cplx log1p_c(cplx z) {
    double x = z.real(), y = z.imag();
    if (std::abs(x) > 0.5 || std::abs(y) > 0.5) {
        return {std::log(std::hypot(1.0 + x, y)), std::atan2(y, 1.0 + x)};
    }
    return {0.5 * std::log1p(x * (2.0 + x) + y * y), std::atan2(y, 1.0 + x)};
}

namespace {
template <class T>
T neville0(const std::vector<double>& h, const std::vector<T>& v) {
    if (h.empty() || h.size() != v.size())
        throw ArgumentError("extrapolation needs matching nonempty samples", "h");
    std::vector<T> p(v);
    size_t n = h.size();
    for (size_t m = 1; m < n; ++m)
        for (size_t i = 0; i + m < n; ++i)
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
    return p[0];
}
}  // namespace

double extrapolate_to_zero(const std::vector<double>& h, const std::vector<double>& v) {
    return neville0(h, v);
}

cplx extrapolate_to_zero(const std::vector<double>& h, const std::vector<cplx>& v) {
    return neville0(h, v);
}

cplx central_difference(const std::function<cplx(cplx)>& f, cplx z, double h) {
    return (f(z + h) - f(z - h)) / (2.0 * h);
}

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::uniform_pos() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

double Rng::exponential(double rate) { return -std::log(uniform_pos()) / rate; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
}

double Rng::inverse_gaussian(double mu, double lambda) {
    double z = normal();
    double y = z * z;
    double q = mu * y;
    double disc = std::sqrt(4.0 * mu * lambda * y + q * q);
    // smaller root written as mu^2 / x2 to avoid cancellation
    double x2 = mu + (mu / (2.0 * lambda)) * (q + disc);
    double x1 = mu * mu / x2;
    return uniform() * (mu + x1) <= mu ? x1 : x2;
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t stream) {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return mix(mix(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

}  // namespace rogers
