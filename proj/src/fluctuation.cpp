#include "rogers/fluctuation.hpp"

#include "rogers/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rogers {

void SpaceTimeQuery::validate() const {
    if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive", "sigma");
    if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("tau must be >= 0", "tau");
    if (!(xi >= 0) || !std::isfinite(xi)) throw DomainError("xi must be >= 0", "xi");
}

const char* cm_mode_name(CmMode m) {
    switch (m) {
        case CmMode::cm_differences: return "cm_differences";
        case CmMode::stieltjes_arg: return "stieltjes_arg";
        case CmMode::cbf_arg: return "cbf_arg";
    }
    return "?";
}

CmMode parse_cm_mode(const std::string& s) {
    if (s == "cm_differences") return CmMode::cm_differences;
    if (s == "stieltjes_arg") return CmMode::stieltjes_arg;
    if (s == "cbf_arg") return CmMode::cbf_arg;
    throw ArgumentError("unknown mode '" + s + "'", "mode");
}

void CmCheckConfig::validate() const {
    if (order < 2) throw ArgumentError("order must be >= 2", "order");
    if (!(tol >= 0)) throw ArgumentError("tol must be >= 0", "tol");
    if (mode == CmMode::cm_differences) {
        if (grid.size() < 2) throw ArgumentError("grid needs at least two points", "grid");
        for (size_t i = 0; i < grid.size(); ++i) {
            if (!(grid[i] > 0)) throw ArgumentError("grid must be positive", "grid");
            if (i && !(grid[i] > grid[i - 1])) throw ArgumentError("grid must be increasing", "grid");
        }
    } else {
        if (samples.empty()) throw ArgumentError("no samples", "samples");
        for (cplx z : samples)
            if (!(z.imag() > 0)) throw ArgumentError("samples must lie in the upper half-plane", "samples");
    }
}

VerifyReport cm_cbf_check(const std::function<cplx(cplx)>& h, const CmCheckConfig& cfg) {
    cfg.validate();
    VerifyReport rep;
    rep.suite = cm_mode_name(cfg.mode);
    if (cfg.mode == CmMode::cm_differences) {
        const auto& x = cfg.grid;
        size_t n = x.size();
        std::vector<double> v(n);
        double scale = 0;
        for (size_t i = 0; i < n; ++i) {
            v[i] = h(cplx(x[i], 0.0)).real();
            scale = std::max(scale, std::abs(v[i]));
        }
        if (scale == 0) scale = 1;
        rep.record("nonnegative", x[0], *std::min_element(v.begin(), v.end()) / scale + cfg.tol);
        // divided differences in place
        std::vector<double> d = v;
        double fact = 1;
        for (int k = 1; k <= cfg.order && size_t(k) < n; ++k) {
            fact *= k;
            double sign = k % 2 ? -1.0 : 1.0;
            double worst = HUGE_VAL;
            size_t at = 0;
            for (size_t i = 0; i + k < n; ++i) {
                d[i] = (d[i + 1] - d[i]) / (x[i + k] - x[i]);
                double span = (x[i + k] - x[i]) / k;
                double fwd = sign * d[i] * fact * std::pow(span, k) / scale;
                if (fwd < worst) worst = fwd, at = i;
            }
            rep.record("order " + std::to_string(k), x[at], worst + cfg.tol);
        }
        return rep;
    }
    for (cplx z : cfg.samples) {
        cplx hv = h(z);
        double a = std::arg(hv), az = std::arg(z);
        if (!std::isfinite(a)) {
            rep.record("finite", z, -1, "non-finite value");
            continue;
        }
        if (cfg.mode == CmMode::cbf_arg)
            rep.record("arg", z, std::min(a, az - a) + cfg.tol);
        else
            rep.record("arg", z, std::min(-a, az + a) + cfg.tol);
    }
    return rep;
}

std::vector<cplx> upper_half_plane_samples(int n, double r_lo, double r_hi, std::uint64_t seed,
                                           double margin) {
    Rng rng(seed);
    std::vector<cplx> out;
    double l0 = std::log(r_lo), l1 = std::log(r_hi);
    for (int i = 0; i < n; ++i) {
        double r = std::exp(l0 + (l1 - l0) * rng.uniform());
        double a = margin + (kPi - 2 * margin) * rng.uniform();
        out.push_back(std::polar(r, a));
    }
    return out;
}

// ---------------------------------------------------------------------------

Fluctuation::Fluctuation(const RogersSpec& spec) : Fluctuation(make_fn(spec)) {}

Fluctuation::Fluctuation(FnPtr f) : solver_(std::move(f)), limits_(solver_.fn()->limits()) {}

bool Fluctuation::compound_poisson() const { return !limits_.infinity_infinite; }

double Fluctuation::kappa_circ(double tau) const {
    if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("tau must be >= 0", "tau");
    if (!compound_poisson()) return 1.0;
    // P(X_t = 0) = exp(-Lambda t) with Lambda = jump rate + killing rate = f(inf)
    double lam = limits_.f_at_infinity;
    return (tau + lam) / (1 + lam);
}

namespace {

void check_xi(double x, const char* field) {
    if (!(x >= 0) || !std::isfinite(x)) throw DomainError(std::string(field) + " must be >= 0", field);
}

void check_tau(double t, const char* field) {
    if (!(t >= 0) || !std::isfinite(t)) throw DomainError(std::string(field) + " must be >= 0", field);
}

void require_spine(const RogersFn& f) {
    if (is_pure_drift(f) || is_constant(f))
        throw MethodUnsupported("the spine measure needs a non-degenerate function");
}

// Arg(zeta - i y)
double arg_sub(cplx zeta, double y) { return std::arg(cplx(zeta.real(), zeta.imag() - y)); }

}  // namespace

FluctResult Fluctuation::kappa_ratio_xi(double tau, double xi1, double xi2, Side side, WhMethod method) {
    check_tau(tau, "tau");
    check_xi(xi1, "xi1");
    check_xi(xi2, "xi2");
    FluctResult out;
    if (xi1 == xi2) {
        out.value = 1;
        out.method_chain = {"identity"};
        return out;
    }
    FactorResult r;
    try {
        r = solver_.ratio(method, side, tau, xi1, xi2);
        out.method_chain = {std::string("wh_ratio:") + method_name(method)};
    } catch (const MethodUnsupported&) {
        if (method != WhMethod::spine) throw;
        r = solver_.ratio(WhMethod::bd, side, tau, xi1, xi2);
        out.method_chain = {"wh_ratio:spine", "fallback:bd"};
    }
    out.value = r.value;
    out.err_estimate = r.err_estimate;
    return out;
}

// log kappa(tau1, p)/kappa(tau2, p) from the contour integral of
// L = log((tau1 + f)/(tau2 + f)) anchored at its value at infinity; the
// ratio kappa(tau1, xi)/kappa(tau2, xi) tends to 1 as xi -> inf.
FactorResult Fluctuation::tau_log(double xi, double tau1, double tau2, Side side) const {
    const RogersFn& f = *fn();
    double s = side == Side::plus ? 1.0 : -1.0;
    double uinf = 0;
    if (!limits_.infinity_infinite) uinf = std::log((tau1 + limits_.f_at_infinity) / (tau2 + limits_.f_at_infinity));
    auto L = [&](double z) {
        cplx fz = f.eval(cplx(z, 0.0));
        return principal_log(tau1 + fz) - principal_log(tau2 + fz);
    };
    std::vector<double> sing;
    for (double h : f.phi_hints())
        if (h != 0 && std::isfinite(h)) sing.push_back(std::abs(h));
    if (xi > 0) sing.push_back(xi);
    std::sort(sing.begin(), sing.end());
    sing.erase(std::unique(sing.begin(), sing.end()), sing.end());
    // z = e^w on a truncated range: L decays only like 1/f at infinity
    const double wmax = 300;
    for (double& h : sing) h = std::log(h);
    for (double w = -40; w <= 40; w += 2) sing.push_back(w);
    for (double w = -250; w <= 250; w += 50) sing.push_back(w);
    std::sort(sing.begin(), sing.end());
    sing.erase(std::remove_if(sing.begin(), sing.end(), [&](double w) { return std::abs(w) >= wmax; }), sing.end());
    for (size_t k = 1; k < sing.size();)
        if (sing[k] - sing[k - 1] < 1e-9) sing.erase(sing.begin() + k);
        else ++k;
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-13;
    cfg.max_subdivisions = 4000;
    cfg.singular_points = sing;

    double base = 0;
    std::function<cplx(double)> integrand;
    if (xi > 0) {
        integrand = [&](double z) -> cplx {
            cplx l = L(z);
            return (z * s * l.imag() + xi * (l.real() - uinf)) / (z * z + xi * xi);
        };
    } else {
        double u0 = 0;
        if (!limits_.zero_infinite)
            u0 = std::log((tau1 + limits_.f_at_zero) / (tau2 + limits_.f_at_zero));
        base = 0.5 * (u0 - uinf);
        integrand = [&](double z) -> cplx { return s * L(z).imag() / z; };
    }
    auto q = integrate_adaptive(
        [&](double w) {
            double z = std::exp(w);
            return z * integrand(z);
        },
        Domain::finite(-wmax, wmax), cfg);
    return {base + q.value.real() / kPi, q.err_estimate / kPi};
}

FluctResult Fluctuation::kappa_ratio_tau(double xi, double tau1, double tau2, Side side) {
    check_xi(xi, "xi");
    if (!(tau1 > 0) || !std::isfinite(tau1)) throw DomainError("tau1 must be positive", "tau1");
    if (!(tau2 > 0) || !std::isfinite(tau2)) throw DomainError("tau2 must be positive", "tau2");
    if (!limits_.infinity_infinite)
        throw MethodUnsupported("bounded f: use kappa_circ and the product identity");
    FluctResult out;
    out.method_chain = {"bd_tau"};
    if (tau1 == tau2) {
        out.value = 1;
        return out;
    }
    FactorResult r = tau_log(xi, tau1, tau2, side);
    out.value = std::exp(r.value);
    out.err_estimate = out.value * r.err_estimate;
    return out;
}

FluctResult Fluctuation::pr_laplace(const SpaceTimeQuery& q) {
    q.validate();
    FluctResult out;
    double v = 1, err = 0;
    double ts = q.tau + q.sigma;
    if (q.tau > 0) {
        FactorResult r = tau_log(0.0, q.sigma, ts, q.side);
        double t = std::exp(r.value);
        v *= t;
        err += t * r.err_estimate;
        out.method_chain.push_back(compound_poisson() ? "bd_tau:anchor_infinity" : "bd_tau");
    }
    if (q.xi > 0) {
        FactorResult r = solver_.ratio(WhMethod::bd, q.side, ts, 0.0, q.xi);
        err = err * r.value + v * r.err_estimate;
        v *= r.value;
        out.method_chain.push_back("wh_ratio:bd");
    }
    if (out.method_chain.empty()) out.method_chain.push_back("identity");
    out.value = v;
    out.err_estimate = err;
    return out;
}

FluctResult Fluctuation::sup_tail(double sigma, double x, Side side, const std::vector<double>& eps_ladder) {
    if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive", "sigma");
    if (!(x > 0) || !std::isfinite(x)) throw DomainError("x must be positive", "x");
    std::vector<double> eps = eps_ladder.empty() ? std::vector<double>{1e-2, 3e-3, 1e-3} : eps_ladder;
    for (double e : eps)
        if (!(e > 0)) throw ArgumentError("eps ladder must be positive", "eps_ladder");

    FactorHandle h(solver_.phi_ptr(sigma), side);
    cplx f0 = h.eval(0.0);
    // g(xi) = (1 - F(0)/F(xi)) / xi is a Stieltjes function; its smoothed
    // density just above the cut at -t
    auto density = [&](double t, double e) {
        auto& memo = tail_memo_[{sigma, e, side == Side::plus ? 1 : -1}];
        auto it = memo.find(t);
        if (it != memo.end()) return it->second;
        cplx xi(-t, e * (1 + t));
        cplx g = (1.0 - f0 / h.eval(xi)) / xi;
        double m = -g.imag() / kPi;
        memo.emplace(t, m);
        return m;
    };

    FluctResult out;
    out.method_chain = {"phi_factor", "stieltjes_inversion"};
    std::vector<double> vals;
    for (double e : eps) {
        // locate the peaks so the quadrature sees near-atoms
        std::vector<double> grid;
        for (double lt = -6; lt <= 6 + 1e-9; lt += 1.0 / 40) grid.push_back(std::pow(10.0, lt));
        std::vector<double> dv(grid.size());
        double top = 0;
        for (size_t i = 0; i < grid.size(); ++i) {
            dv[i] = density(grid[i], e);
            top = std::max(top, dv[i]);
        }
        std::vector<double> sing;
        for (size_t i = 1; i + 1 < grid.size(); ++i)
            if (dv[i] > dv[i - 1] && dv[i] >= dv[i + 1] && dv[i] > 1e-3 * top) sing.push_back(grid[i]);
        QuadratureConfig cfg;
        cfg.rel_tol = 1e-10;
        cfg.abs_tol = 1e-14;
        cfg.max_subdivisions = 4000;
        cfg.singular_points = sing;
        double lowest = 0;
        auto q = integrate_adaptive(
            [&](double t) -> cplx {
                double m = density(t, e);
                lowest = std::min(lowest, m);
                return std::exp(-x * t) * std::max(m, 0.0);
            },
            Domain::half(0.0), cfg);
        if (lowest < -1e-6) throw InversionInstability("negative spectral density " + std::to_string(lowest));
        vals.push_back(q.value.real());
    }
    double v = eps.size() > 1 ? extrapolate_to_zero(eps, vals) : vals[0];
    size_t finest = std::min_element(eps.begin(), eps.end()) - eps.begin();
    out.err_estimate = std::abs(v - vals[finest]);
    out.value = std::clamp(v, 0.0, 1.0);
    return out;
}

// ---------------------------------------------------------------------------

SpineMeasure& Fluctuation::spine() {
    require_spine(*fn());
    return solver_.spine();
}

std::function<cplx(cplx)> Fluctuation::ratio_xi_in_tau(double xi1, double xi2, Side side) {
    check_xi(xi1, "xi1");
    check_xi(xi2, "xi2");
    double s = side == Side::plus ? 1.0 : -1.0;
    auto nodes = spine().discretize(
        [=](const SpinePoint& p) { return arg_sub(p.zeta, s * xi1) - arg_sub(p.zeta, s * xi2); }, {xi1, xi2});
    return [nodes = std::move(nodes), s](cplx tau) { return std::exp(-s * nodes.sum(tau) / kPi); };
}

std::function<cplx(cplx)> Fluctuation::kappa_in_tau(double xi, double tau_ref, Side side) {
    check_xi(xi, "xi");
    check_tau(tau_ref, "tau_ref");
    double s = side == Side::plus ? 1.0 : -1.0;
    // Arg(zeta - i s xi2) -> -s pi/2 as xi2 -> inf
    auto nodes = spine().discretize(
        [=](const SpinePoint& p) { return arg_sub(p.zeta, s * xi) + s * kPi / 2; }, {xi});
    cplx ref = nodes.sum(tau_ref);
    return [nodes = std::move(nodes), s, ref](cplx tau) { return std::exp(-s * (nodes.sum(tau) - ref) / kPi); };
}

std::function<cplx(cplx)> Fluctuation::product_in_tau(double xi1, double xi2) {
    check_xi(xi1, "xi1");
    check_xi(xi2, "xi2");
    if (limits_.zero_infinite) throw MethodUnsupported("f(0+) is infinite");
    const double R = 1.0;
    SpineMeasure& sm = spine();
    double lamR = sm.point(R).lambda;
    auto nodes = sm.discretize(
        [=](const SpinePoint& p) {
            return arg_sub(p.zeta, xi1) - arg_sub(p.zeta, -xi2) + (p.r < R ? kPi : 0.0);
        },
        {xi1, xi2, R});
    double norm = 1 + limits_.f_at_zero;
    return [nodes = std::move(nodes), lamR, norm](cplx tau) {
        return std::exp(std::log(tau + lamR) - nodes.sum(tau) / kPi) / norm;
    };
}

std::function<cplx(cplx)> Fluctuation::kappa_in_xi(double tau, double xi_ref, Side side) {
    check_tau(tau, "tau");
    if (!(xi_ref > 0)) throw DomainError("xi_ref must be positive", "xi_ref");
    FactorHandle h(solver_.phi_ptr(tau), side);
    cplx ref = h.eval(xi_ref);
    return [h, ref](cplx xi) { return h.eval(xi) / ref; };
}

std::function<cplx(cplx)> Fluctuation::laplace_in_sigma(double xi, Side side) {
    auto r = ratio_xi_in_tau(0.0, xi, side);
    return [r](cplx sigma) { return r(sigma) / sigma; };
}

// ---------------------------------------------------------------------------

FluctResult kappa_ratio_xi(const RogersSpec& spec, double tau, double xi1, double xi2, Side side,
                           WhMethod method) {
    if (!(xi1 > 0)) throw DomainError("xi1 must be positive", "xi1");
    if (!(xi2 > 0)) throw DomainError("xi2 must be positive", "xi2");
    Fluctuation fl(spec);
    return fl.kappa_ratio_xi(tau, xi1, xi2, side, method);
}

FluctResult kappa_ratio_tau(const RogersSpec& spec, double xi, double tau1, double tau2, Side side) {
    Fluctuation fl(spec);
    return fl.kappa_ratio_tau(xi, tau1, tau2, side);
}

double kappa_circ(const RogersSpec& spec, double tau) { return Fluctuation(spec).kappa_circ(tau); }

FluctResult pr_laplace(const RogersSpec& spec, double sigma, double tau, double xi, Side side) {
    Fluctuation fl(spec);
    return fl.pr_laplace({sigma, tau, xi, side});
}

FluctResult sup_tail(const RogersSpec& spec, double sigma, double x, const std::vector<double>& eps_ladder) {
    Fluctuation fl(spec);
    return fl.sup_tail(sigma, x, Side::plus, eps_ladder);
}

SpaceTimeCheck space_time_check(Fluctuation& fl, double tau, double xi) {
    if (!(tau > 0) || !std::isfinite(tau)) throw DomainError("tau must be positive", "tau");
    if (!(xi > 0) || !std::isfinite(xi)) throw DomainError("xi must be positive", "xi");
    const RogersFn& f = *fl.fn();
    LimitsResult lim = f.limits();
    if (lim.zero_infinite) throw MethodUnsupported("f(0+) is infinite");
    SpaceTimeCheck out;
    out.lhs = (tau + f.eval(cplx(xi, 0.0))) / ((1 + lim.f_at_zero) * fl.kappa_circ(tau));
    // kappa(1, 0) kappa-(1, 0) = 1 fixes the normalization
    auto hp = fl.kappa_in_xi(tau, 1.0, Side::plus);
    auto hm = fl.kappa_in_xi(tau, 1.0, Side::minus);
    cplx xp = hp(cplx(0.0, -xi)) / hp(0.0);
    cplx xm = hm(cplx(0.0, xi)) / hm(0.0);
    double tp = 1, tm = 1;
    if (tau != 1) {
        // kappa(tau, 0)/kappa(1, 0) as a Laplace transform of the argmax time
        auto ratio = [&](Side sd) {
            if (tau > 1) return 1 / fl.pr_laplace({1.0, tau - 1, 0.0, sd}).value;
            return fl.pr_laplace({tau, 1 - tau, 0.0, sd}).value;
        };
        tp = ratio(Side::plus);
        tm = ratio(Side::minus);
    }
    out.rhs = xp * xm * tp * tm;
    out.rel_error = std::abs(out.lhs - out.rhs) / std::abs(out.lhs);
    return out;
}

}  // namespace rogers
