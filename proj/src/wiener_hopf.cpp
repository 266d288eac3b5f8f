#include "rogers/wiener_hopf.hpp"

#include "rogers/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rogers {

const char* side_name(Side s) { return s == Side::plus ? "plus" : "minus"; }

const char* method_name(WhMethod m) {
    switch (m) {
        case WhMethod::bd: return "bd";
        case WhMethod::spine: return "spine";
        default: return "phi";
    }
}

Side parse_side(const std::string& s) {
    if (s == "plus") return Side::plus;
    if (s == "minus") return Side::minus;
    throw ArgumentError("side must be plus or minus", "side");
}

WhMethod parse_method(const std::string& s) {
    if (s == "bd") return WhMethod::bd;
    if (s == "spine") return WhMethod::spine;
    if (s == "phi") return WhMethod::phi;
    throw ArgumentError("method must be bd, spine or phi", "method");
}

namespace {

std::pair<double, double> scale_range(const RogersFn& f) {
    double lo = 1, hi = 1;
    for (double h : f.phi_hints())
        if (h != 0 && std::isfinite(h)) {
            lo = std::min(lo, std::abs(h));
            hi = std::max(hi, std::abs(h));
        }
    return {lo, hi};
}

PhiProfile sample_profile(const RogersFn& f, int sign, const PhiCacheConfig& cfg) {
    auto [lo, hi] = scale_range(f);
    double s0 = cfg.window_lo * lo, s1 = cfg.window_hi * hi;
    auto phi = [&](double s) { return boundary_phi(f, sign * s); };
    LimitsResult lim = f.limits();
    bool vanishes_at_zero = !lim.zero_infinite && lim.f_at_zero > 0;

    // widen by decades until phi has settled; slowly varying ends (small
    // exponents) need many decades
    double w0 = s0, w1 = s1;
    while (w0 > 1e-290) {
        double a = phi(w0);
        if ((vanishes_at_zero ? std::abs(a) : std::abs(a - phi(10 * w0))) < cfg.settle_tol) break;
        w0 /= 10;
    }
    while (w1 < 1e290 && std::abs(phi(w1) - phi(w1 / 10)) >= cfg.settle_tol) w1 *= 10;

    std::vector<double> nodes;
    double d0 = std::log10(s0), d1 = std::log10(s1);
    int n = std::max(2, static_cast<int>(std::ceil((d1 - d0) * cfg.cells_per_decade)));
    for (int k = 0; k <= n; ++k) nodes.push_back(std::pow(10.0, d0 + (d1 - d0) * k / n));
    for (double d = std::log10(w0); d < d0 - 1e-9; d += 1.0 / cfg.outer_cells_per_decade)
        nodes.push_back(std::pow(10.0, d));
    for (double d = std::log10(w1); d > d1 + 1e-9; d -= 1.0 / cfg.outer_cells_per_decade)
        nodes.push_back(std::pow(10.0, d));
    for (double h : f.phi_hints()) {
        double s = sign * h;
        if (s > w0 && s < w1) {
            nodes.push_back(s * (1 - 1e-10));
            nodes.push_back(s * (1 + 1e-10));
        }
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::map<double, double> val;
    for (double s : nodes) val[s] = phi(s);

    // refine pairs that jump or bend
    std::vector<std::pair<double, double>> work;
    for (size_t k = 0; k + 1 < nodes.size(); ++k) work.emplace_back(nodes[k], nodes[k + 1]);
    while (!work.empty()) {
        auto [a, b] = work.back();
        work.pop_back();
        if ((b - a) / a <= cfg.min_rel_width) continue;
        double m = std::sqrt(a * b);
        if (!(m > a && m < b)) continue;
        double fa = val[a], fb = val[b];
        double fm = phi(m);
        double lin = fa + (fb - fa) * (m - a) / (b - a);
        if (std::abs(fb - fa) > cfg.max_jump || std::abs(fm - lin) > cfg.max_midpoint_dev) {
            val[m] = fm;
            work.emplace_back(a, m);
            work.emplace_back(m, b);
        }
    }

    PhiProfile p;
    auto it = val.begin();
    // f(0+) > 0 forces phi(0+) = 0
    double phi0 = vanishes_at_zero ? 0.0 : it->second;
    p.cells.push_back({0.0, it->first, phi0, it->second});
    for (auto nx = std::next(it); nx != val.end(); ++it, ++nx)
        p.cells.push_back({it->first, nx->first, it->second, nx->second});
    p.phi_hi = val.rbegin()->second;
    p.compress(1e-12);
    return p;
}

cplx exponent(const PhiCache& pc, cplx xi) {
    cplx zp(xi.imag(), -xi.real());
    cplx zm(-xi.imag(), xi.real());
    return (pc.plus.integral(zp) + pc.minus.integral(zm)) / kPi;
}

}  // namespace

std::shared_ptr<const PhiCache> build_phi_cache(const RogersFn& f, const PhiCacheConfig& cfg) {
    auto pc = std::make_shared<PhiCache>();
    if (auto ex = f.exact_phi()) {
        pc->plus = ex->first;
        pc->minus = ex->second;
        pc->c = f.exp_constant().value_or(1.0);
        pc->exact = true;
        return pc;
    }
    pc->plus = sample_profile(f, +1, cfg);
    pc->minus = sample_profile(f, -1, cfg);
    cplx e = exponent(*pc, cplx(1.0, 0.0));
    pc->c = std::abs(f.eval(cplx(1.0, 0.0))) / std::exp(e.real());
    return pc;
}

FactorHandle::FactorHandle(std::shared_ptr<const PhiCache> cache, Side side, double scale)
    : cache_(std::move(cache)), side_(side), scale_(scale) {}

FactorHandle FactorHandle::from_fn(const RogersFn& f, Side side) { return {build_phi_cache(f), side}; }

FactorHandle FactorHandle::from_spec(const RogersSpec& spec, Side side) {
    return from_fn(*make_fn(spec), side);
}

FactorHandle FactorHandle::rescaled(double k) const {
    return {cache_, side_, side_ == Side::plus ? scale_ * k : scale_ / k};
}

cplx FactorHandle::eval(cplx xi) const {
    if (xi.imag() == 0 && xi.real() < 0) throw DomainError("factor evaluated on the cut", "xi");
    if (xi == cplx(0.0)) {
        double e = profile().integral_at_zero() / kPi;
        return scale_ * std::sqrt(cache_->c) * std::exp(e);
    }
    return scale_ * std::sqrt(cache_->c) * std::exp(profile().integral(xi) / kPi);
}

cplx wh_eval_from_phi(const FactorHandle& h, cplx xi) { return h.eval(xi); }

// ---------------------------------------------------------------------------

namespace {

double sgn0(double p) { return std::signbit(p) ? -1.0 : 1.0; }

// log of f+(p)/f+(q)-type quantities from the contour integral over R, with
// the pole at i p (upper half-plane for p > 0). The log-kernel is folded to
// z > 0 using f(-z) = conj f(z).
FactorResult bd_log(const RogersFn& f, double tau, double p1, double p2) {
    std::vector<double> sing;
    for (double h : f.phi_hints())
        if (h != 0 && std::isfinite(h)) sing.push_back(std::abs(h));
    for (double p : {p1, p2})
        if (p != 0) sing.push_back(std::abs(p));
    std::sort(sing.begin(), sing.end());
    sing.erase(std::unique(sing.begin(), sing.end()), sing.end());
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-13;
    cfg.max_subdivisions = 4000;
    cfg.singular_points = sing;

    auto logf = [&](double z) { return principal_log(tau + f.eval(cplx(z, 0.0))); };
    double base = 0;
    double u0 = 0;
    bool anchored = p1 == 0 || p2 == 0;
    if (anchored) {
        double f0 = tau + f.limits().f_at_zero;
        if (!(f0 > 0)) throw ConventionViolation("a zero argument needs tau + f(0+) > 0", "xi");
        u0 = std::log(f0);
        base = 0.5 * (sgn0(p1) - sgn0(p2)) * u0;
    }
    auto D = [&](double z) -> cplx {
        cplx L = logf(z);
        double u = L.real() - u0, v = L.imag();
        double t1 = (p1 * u + z * v) / (z * z + p1 * p1);
        double t2 = (p2 * u + z * v) / (z * z + p2 * p2);
        return t1 - t2;
    };
    auto q = integrate_adaptive(D, Domain::half(0.0), cfg);
    return {base + q.value.real() / kPi, q.err_estimate / kPi};
}

double arg_sub(cplx zeta, double y) { return std::arg(cplx(zeta.real(), zeta.imag() - y)); }

}  // namespace

WhSolver::WhSolver(FnPtr f) : f_(std::move(f)) {}

SpineMeasure& WhSolver::spine() {
    if (!spine_) spine_ = std::make_unique<SpineMeasure>(f_);
    return *spine_;
}

std::shared_ptr<const PhiCache> WhSolver::phi_ptr(double tau) {
    for (const auto& [t, c] : phi_)
        if (t == tau) return c;
    auto c = tau == 0 ? build_phi_cache(*f_) : build_phi_cache(*shifted(f_, tau));
    phi_.emplace_back(tau, c);
    return c;
}

namespace {

void check_args(double tau, double x1, double x2) {
    if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("tau must be >= 0", "tau");
    if (!(x1 >= 0) || !std::isfinite(x1)) throw DomainError("xi1 must be >= 0", "xi1");
    if (!(x2 >= 0) || !std::isfinite(x2)) throw DomainError("xi2 must be >= 0", "xi2");
}

void require_spine(const RogersFn& f) {
    if (is_pure_drift(f))
        throw MethodUnsupported("spine method needs a non-degenerate function");
    if (is_constant(f)) throw MethodUnsupported("spine method needs a non-constant function");
}

// two discretizations; the finer one is returned with their gap as error
FactorResult spine_log(SpineMeasure& sm, const std::function<double(const SpinePoint&)>& g,
                       const std::vector<double>& splits, double tau) {
    double fine = sm.discretize(g, splits, 1e-11).sum(tau).real();
    double coarse = sm.discretize(g, splits, 1e-9).sum(tau).real();
    return {fine, std::abs(fine - coarse)};
}

}  // namespace

FactorResult WhSolver::ratio(WhMethod m, Side side, double tau, double x1, double x2) {
    check_args(tau, x1, x2);
    if (x1 == x2) return {1.0, 0.0};
    double lg = 0, err = 0;
    switch (m) {
        case WhMethod::bd: {
            FactorResult r = side == Side::plus ? bd_log(*f_, tau, x1, x2) : bd_log(*f_, tau, -x2, -x1);
            lg = r.value;
            err = r.err_estimate;
            break;
        }
        case WhMethod::spine: {
            require_spine(*f_);
            double s = side == Side::plus ? 1.0 : -1.0;
            auto g = [&](const SpinePoint& p) { return arg_sub(p.zeta, s * x1) - arg_sub(p.zeta, s * x2); };
            FactorResult r = spine_log(spine(), g, {x1, x2}, tau);
            lg = -s * r.value / kPi;
            err = r.err_estimate / kPi;
            break;
        }
        case WhMethod::phi: {
            const PhiCache& pc = phi(tau);
            const PhiProfile& pr = side == Side::plus ? pc.plus : pc.minus;
            auto I = [&](double x) { return x == 0 ? pr.integral_at_zero() : pr.integral(cplx(x, 0.0)).real(); };
            lg = (I(x1) - I(x2)) / kPi;
            err = pc.exact ? 1e-13 * (1 + std::abs(lg)) : 1e-6 * (1 + std::abs(lg));
            break;
        }
    }
    double v = std::exp(lg);
    return {v, v * err};
}

FactorResult WhSolver::product(WhMethod m, double tau, double x1, double x2, double R) {
    check_args(tau, x1, x2);
    if (!(R >= 0) || !std::isfinite(R)) throw DomainError("R must be >= 0", "R");
    double lg = 0, err = 0;
    switch (m) {
        case WhMethod::bd: {
            FactorResult r = bd_log(*f_, tau, x1, -x2);
            lg = r.value;
            err = r.err_estimate;
            break;
        }
        case WhMethod::spine: {
            require_spine(*f_);
            double lamR;
            if (R == 0) {
                lamR = tau + f_->limits().f_at_zero;
                if (!(lamR > 0)) throw ConventionViolation("R = 0 needs f(0+) > 0", "R");
            } else {
                lamR = tau + spine().point(R).lambda;
            }
            auto g = [&](const SpinePoint& p) {
                return arg_sub(p.zeta, x1) - arg_sub(p.zeta, -x2) + (p.r < R ? kPi : 0.0);
            };
            std::vector<double> splits{x1, x2};
            if (R > 0) splits.push_back(R);
            FactorResult r = spine_log(spine(), g, splits, tau);
            lg = std::log(lamR) - r.value / kPi;
            err = r.err_estimate / kPi;
            break;
        }
        case WhMethod::phi: {
            const PhiCache& pc = phi(tau);
            auto I = [](const PhiProfile& pr, double x) {
                return x == 0 ? pr.integral_at_zero() : pr.integral(cplx(x, 0.0)).real();
            };
            lg = std::log(pc.c) + (I(pc.plus, x1) + I(pc.minus, x2)) / kPi;
            err = pc.exact ? 1e-13 * (1 + std::abs(lg)) : 1e-6 * (1 + std::abs(lg));
            break;
        }
    }
    double v = std::exp(lg);
    return {v, v * err};
}

FactorResult wh_ratio(const RogersSpec& spec, WhMethod method, Side side, double xi1, double xi2) {
    if (!(xi1 > 0)) throw DomainError("xi1 must be positive", "xi1");
    if (!(xi2 > 0)) throw DomainError("xi2 must be positive", "xi2");
    WhSolver s(make_fn(spec));
    return s.ratio(method, side, 0.0, xi1, xi2);
}

FactorResult wh_product(const RogersSpec& spec, WhMethod method, double xi1, double xi2, double R) {
    if (!(xi1 > 0)) throw DomainError("xi1 must be positive", "xi1");
    if (!(xi2 > 0)) throw DomainError("xi2 must be positive", "xi2");
    WhSolver s(make_fn(spec));
    return s.product(method, 0.0, xi1, xi2, R);
}

VerifyReport factorization_check(const RogersFn& f, const std::vector<cplx>& samples, double tol) {
    VerifyReport rep;
    rep.suite = "factorization";
    auto pc = build_phi_cache(f);
    FactorHandle hp(pc, Side::plus), hm(pc, Side::minus);
    for (cplx xi : samples) {
        if (!(xi.real() > 0)) {
            rep.record("domain", xi, -1, "sample outside the right half-plane");
            continue;
        }
        cplx v = f.eval(xi);
        cplx w = hp.eval(cplx(xi.imag(), -xi.real())) * hm.eval(cplx(-xi.imag(), xi.real()));
        double rel = std::abs(v - w) / std::abs(v);
        rep.record("factorization", xi, (tol - rel) / tol);
    }
    return rep;
}

VerifyReport factorization_check(const RogersSpec& spec, const std::vector<cplx>& samples, double tol) {
    return factorization_check(*make_fn(spec), samples, tol);
}

// ---------------------------------------------------------------------------

double bm_root(const BmDrift& bm, Side side) {
    double q = std::sqrt(bm.b * bm.b + 2 * bm.sigma);
    return side == Side::plus ? q - bm.b : q + bm.b;
}

double stable_positivity(const StableLaw& law) {
    if (!(law.alpha > 0 && law.alpha <= 2)) throw DomainError("alpha must lie in (0, 2]", "alpha");
    if (!(std::abs(law.c) > 0)) throw DomainError("c must be non-zero", "c");
    double a = std::arg(law.c);
    if (std::abs(a) > kPi / 2 * std::min(law.alpha, 2 - law.alpha) + 1e-15)
        throw DomainError("arg c outside the admissible wedge", "c");
    return 0.5 - a / (law.alpha * kPi);
}

double closed_form_factors(const ClosedFamily& family, Side side, double xi) {
    if (!(xi >= 0)) throw DomainError("closed-form factors are evaluated on [0, inf)", "xi");
    if (const auto* bm = std::get_if<BmDrift>(&family)) {
        if (!(bm->sigma >= 0)) throw DomainError("sigma must be >= 0", "sigma");
        return std::sqrt(0.5) * (xi + bm_root(*bm, side));
    }
    const auto& law = std::get<StableLaw>(family);
    double rho = stable_positivity(law);
    double e = side == Side::plus ? law.alpha * rho : law.alpha * (1 - rho);
    return std::sqrt(std::abs(law.c)) * std::pow(xi, e);
}

}  // namespace rogers
