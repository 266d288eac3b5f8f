#include "rogers/core.hpp"

#include "rogers/errors.hpp"
#include "rogers/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rogers {

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Right half-plane representative: Re < 0 maps through f(-conj xi) = conj f(xi),
// and a zero real part of either sign is read as +0.
bool reflect(cplx& xi) {
    if (xi.real() < 0) {
        xi = cplx(-xi.real(), xi.imag());
        return true;
    }
    if (xi.real() == 0) xi = cplx(0.0, xi.imag());
    return false;
}

// (-i xi + m) or (i xi + m), built from components so that a signed zero
// real part of xi selects the side of the cut.
cplx shifted_arg(Orientation o, cplx xi, double m) {
    if (o == Orientation::minus_i) return {xi.imag() + m, -xi.real()};
    return {-xi.imag() + m, xi.real()};
}

cplx cpow(cplx z, double alpha) {
    if (z == cplx(0.0)) return 0.0;
    return std::exp(alpha * std::log(z));
}

class LevyFn final : public RogersFn {
public:
    explicit LevyFn(const LevyAtomic& s) : spec_(s) {
        for (const auto& at : s.atoms) {
            lam_.push_back(at.s);
            wt_.push_back(at.w / (kPi * std::abs(at.s)));
        }
        js_ = jump_summary(s);
        drift_ = s.b - js_.compensator;
    }

    cplx eval(cplx xi) const override {
        bool refl = reflect(xi);
        cplx tau(xi.imag(), -xi.real());  // -i xi
        if (xi.real() == 0) {
            for (double s : lam_)
                if (xi.imag() + s == 0.0) throw DomainError("evaluation at a pole of the jump part", "xi");
        }
        cplx v = spec_.a * xi * xi + cplx(0, -drift_) * xi + spec_.c;
        if (!lam_.empty()) v += tau * kernels::stieltjes_sum(wt_.data(), lam_.data(), lam_.size(), tau);
        return refl ? std::conj(v) : v;
    }

    LimitsResult limits() const override {
        LimitsResult r;
        r.f_at_zero = spec_.c;
        if (js_.compound_poisson)
            r.f_at_infinity = spec_.c + js_.jump_rate;
        else
            r.infinity_infinite = true, r.f_at_infinity = kInf;
        return r;
    }

    std::vector<double> phi_hints() const override { return lam_; }

private:
    LevyAtomic spec_;
    std::vector<double> lam_, wt_;
    JumpSummary js_;
    double drift_ = 0;
};

class StableFn final : public RogersFn {
public:
    explicit StableFn(const StableSum& s) : spec_(s) {}

    cplx eval(cplx xi) const override {
        bool refl = reflect(xi);
        cplx v = 0;
        for (const auto& t : spec_.terms) {
            if (t.w == 0) continue;
            v += t.w * cpow(shifted_arg(t.orientation, xi, t.m), t.alpha);
        }
        return refl ? std::conj(v) : v;
    }

    LimitsResult limits() const override {
        LimitsResult r;
        bool any = false;
        for (const auto& t : spec_.terms) {
            if (t.w == 0) continue;
            any = true;
            if (t.m > 0) r.f_at_zero += t.w * std::pow(t.m, t.alpha);
        }
        r.infinity_infinite = any;
        r.f_at_infinity = any ? kInf : 0.0;
        return r;
    }

    std::vector<double> phi_hints() const override {
        std::vector<double> h;
        for (const auto& t : spec_.terms)
            if (t.m > 0) h.push_back(t.orientation == Orientation::minus_i ? t.m : -t.m);
        return h;
    }

private:
    StableSum spec_;
};

class RationalFn final : public RogersFn {
public:
    explicit RationalFn(const RationalProduct& s) : spec_(s) {}

    cplx eval(cplx xi) const override {
        bool refl = reflect(xi);
        cplx v = spec_.prefactor;
        for (const auto& f : spec_.factors) {
            cplx z = shifted_arg(f.orientation, xi, f.m);
            if (f.exponent > 0) {
                v *= z;
            } else {
                if (z == cplx(0.0)) throw DomainError("evaluation at a pole", "xi");
                v /= z;
            }
        }
        return refl ? std::conj(v) : v;
    }

    LimitsResult limits() const override {
        LimitsResult r;
        int zero_order = 0, degree = 0;
        double at0 = spec_.prefactor;
        for (const auto& f : spec_.factors) {
            degree += f.exponent;
            if (f.m == 0)
                zero_order += f.exponent;
            else
                at0 *= std::pow(f.m, f.exponent);
        }
        if (zero_order > 0)
            r.f_at_zero = 0;
        else if (zero_order < 0)
            r.zero_infinite = true, r.f_at_zero = kInf;
        else
            r.f_at_zero = at0;
        if (degree > 0)
            r.infinity_infinite = true, r.f_at_infinity = kInf;
        else if (degree < 0)
            r.f_at_infinity = 0;
        else
            r.f_at_infinity = spec_.prefactor;
        return r;
    }

    std::vector<double> phi_hints() const override {
        std::vector<double> h;
        for (const auto& f : spec_.factors)
            if (f.m > 0) h.push_back(f.orientation == Orientation::minus_i ? f.m : -f.m);
        return h;
    }

private:
    RationalProduct spec_;
};

class PhiFn final : public RogersFn {
public:
    explicit PhiFn(const PhiRep& s)
        : spec_(s), plus_(profile_from_table(s.phi, +1)), minus_(profile_from_table(s.phi, -1)) {}

    cplx eval(cplx xi) const override {
        bool refl = reflect(xi);
        if (xi.real() == 0) {
            double y = xi.imag();
            if (y == 0) throw DomainError("evaluation at the origin", "xi");
            // on i R the point -y must lie outside the essential support
            double s = -y;
            if (spec_.phi.left(s) > 0 || spec_.phi.right(s) > 0)
                throw DomainError("point on the imaginary axis outside the domain", "xi");
        }
        cplx zp(xi.imag(), -xi.real());
        cplx zm(-xi.imag(), xi.real());
        cplx e = (plus_.integral(zp) + minus_.integral(zm)) / kPi;
        cplx v = spec_.c * std::exp(e);
        return refl ? std::conj(v) : v;
    }

    LimitsResult limits() const override {
        LimitsResult r;
        double e0 = (plus_.integral_at_zero() + minus_.integral_at_zero()) / kPi;
        double ei = (plus_.integral_at_infinity() + minus_.integral_at_infinity()) / kPi;
        r.f_at_zero = spec_.c * std::exp(e0);
        r.f_at_infinity = spec_.c * std::exp(ei);
        r.zero_infinite = std::isinf(r.f_at_zero);
        r.infinity_infinite = std::isinf(r.f_at_infinity);
        return r;
    }

    std::vector<double> phi_hints() const override {
        std::vector<double> h;
        for (double b : spec_.phi.breakpoints)
            if (b != 0) h.push_back(b);
        return h;
    }

    std::optional<std::pair<PhiProfile, PhiProfile>> exact_phi() const override {
        return std::make_pair(plus_, minus_);
    }
    std::optional<double> exp_constant() const override { return spec_.c; }

private:
    PhiRep spec_;
    PhiProfile plus_, minus_;
};

class ShiftedFn final : public RogersFn {
public:
    ShiftedFn(FnPtr base, double tau) : base_(std::move(base)), tau_(tau) {}

    cplx eval(cplx xi) const override { return tau_ + base_->eval(xi); }

    LimitsResult limits() const override {
        LimitsResult r = base_->limits();
        r.f_at_zero += tau_;
        r.f_at_infinity += tau_;
        return r;
    }

    std::vector<double> phi_hints() const override { return base_->phi_hints(); }

    const FnPtr& base() const { return base_; }
    double tau() const { return tau_; }

private:
    FnPtr base_;
    double tau_;
};

}  // namespace

// ---------------------------------------------------------------------------
// reports

void VerifyReport::record(const std::string& check, cplx point, double margin,
                          const std::string& detail) {
    ++n_checks;
    if (!(margin >= 0)) {
        ++n_failures;
        if (witnesses.size() < 32) witnesses.push_back({check, point, margin, detail});
    }
    if (std::isnan(margin))
        worst_margin = -kInf;
    else
        worst_margin = std::min(worst_margin, margin);
}

void VerifyReport::merge(const VerifyReport& o) {
    n_checks += o.n_checks;
    n_failures += o.n_failures;
    worst_margin = std::min(worst_margin, o.worst_margin);
    for (const auto& w : o.witnesses)
        if (witnesses.size() < 32) witnesses.push_back(w);
}

nlohmann::json VerifyReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["n_checks"] = n_checks;
    j["n_failures"] = n_failures;
    j["worst_margin"] = std::isfinite(worst_margin) ? nlohmann::json(worst_margin) : nlohmann::json(nullptr);
    j["witnesses"] = nlohmann::json::array();
    for (const auto& w : witnesses)
        j["witnesses"].push_back({{"check", w.check},
                                  {"point", {{"re", w.point.real()}, {"im", w.point.imag()}}},
                                  {"margin", std::isfinite(w.margin) ? nlohmann::json(w.margin) : nlohmann::json(nullptr)},
                                  {"detail", w.detail}});
    return j;
}

// ---------------------------------------------------------------------------
// construction

JumpSummary jump_summary(const LevyAtomic& s) {
    JumpSummary js;
    double scale = std::abs(s.b);
    for (const auto& at : s.atoms) {
        double as = std::abs(at.s);
        double rate = at.w / (kPi * as);
        js.jump_rate += rate;
        js.compensator += (at.s > 0 ? 1.0 : -1.0) * rate / (1.0 + as);
        scale += rate;
    }
    js.compound_poisson =
        s.a == 0 && std::abs(s.b - js.compensator) <= 1e-12 * std::max(1.0, scale);
    return js;
}

FnPtr make_fn(const RogersSpec& spec) {
    switch (spec.index()) {
        case 0: return std::make_shared<LevyFn>(std::get<LevyAtomic>(spec));
        case 1: return std::make_shared<StableFn>(std::get<StableSum>(spec));
        case 2: return std::make_shared<RationalFn>(std::get<RationalProduct>(spec));
        default: return std::make_shared<PhiFn>(std::get<PhiRep>(spec));
    }
}

FnPtr shifted(const FnPtr& f, double tau) {
    if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("shift must be finite and nonnegative", "tau");
    if (tau == 0) return f;
    if (auto* s = dynamic_cast<const ShiftedFn*>(f.get())) return std::make_shared<ShiftedFn>(s->base(), s->tau() + tau);
    return std::make_shared<ShiftedFn>(f, tau);
}

FnPtr shifted(const RogersSpec& spec, double tau) {
    if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("shift must be finite and nonnegative", "tau");
    if (auto* la = std::get_if<LevyAtomic>(&spec)) {
        LevyAtomic s = *la;
        s.c += tau;
        return make_fn(s);
    }
    return shifted(make_fn(spec), tau);
}

bool is_pure_drift(const RogersFn& f) {
    cplx f1 = f.eval(1.0), f2 = f.eval(2.0), f5 = f.eval(0.5);
    double sc = std::abs(f1) + std::abs(f2) + std::abs(f5);
    if (sc == 0) return true;
    double tol = 1e-13 * sc;
    return std::abs(f1.real()) <= tol && std::abs(f2.real()) <= tol && std::abs(f5.real()) <= tol &&
           std::abs(f2 - 2.0 * f1) <= tol && std::abs(f1 - 2.0 * f5) <= tol;
}

// ---------------------------------------------------------------------------
// validation

namespace {

void check_finite(double x, const std::string& field) {
    if (!std::isfinite(x)) throw ValidationError("non-finite value", field);
}

std::string idx(const char* base, size_t i, const char* leaf) {
    return std::string(base) + "[" + std::to_string(i) + "]." + leaf;
}

}  // namespace

RogersSpec normalize_spec(const RogersSpec& spec) {
    if (auto* p = std::get_if<LevyAtomic>(&spec)) {
        LevyAtomic s = *p;
        check_finite(s.a, "a");
        check_finite(s.b, "b");
        check_finite(s.c, "c");
        if (s.a < 0) throw ValidationError("Gaussian coefficient must be nonnegative", "a");
        if (s.c < 0) throw ValidationError("kill rate must be nonnegative", "c");
        for (size_t i = 0; i < s.atoms.size(); ++i) {
            check_finite(s.atoms[i].s, idx("atoms", i, "s"));
            check_finite(s.atoms[i].w, idx("atoms", i, "w"));
            if (s.atoms[i].s == 0) throw ValidationError("atom location must be nonzero", idx("atoms", i, "s"));
            if (!(s.atoms[i].w > 0)) throw ValidationError("atom weight must be positive", idx("atoms", i, "w"));
        }
        std::stable_sort(s.atoms.begin(), s.atoms.end(), [](const Atom& x, const Atom& y) {
            return x.s < y.s || (x.s == y.s && x.w < y.w);
        });
        return s;
    }
    if (auto* p = std::get_if<StableSum>(&spec)) {
        StableSum s = *p;
        if (s.terms.empty()) throw ValidationError("at least one term is required", "terms");
        bool any = false;
        for (size_t i = 0; i < s.terms.size(); ++i) {
            const auto& t = s.terms[i];
            check_finite(t.w, idx("terms", i, "w"));
            check_finite(t.m, idx("terms", i, "m"));
            check_finite(t.alpha, idx("terms", i, "alpha"));
            if (t.w < 0) throw ValidationError("weight must be nonnegative", idx("terms", i, "w"));
            if (t.m < 0) throw ValidationError("tempering must be nonnegative", idx("terms", i, "m"));
            if (!(t.alpha > 0 && t.alpha <= 2)) throw ValidationError("alpha must lie in (0, 2]", idx("terms", i, "alpha"));
            if (t.alpha > 1 && t.m != 0) throw ValidationError("terms with alpha > 1 must have m = 0", idx("terms", i, "m"));
            any = any || t.w > 0;
        }
        if (!any) throw ValidationError("all weights vanish", "terms");
        std::stable_sort(s.terms.begin(), s.terms.end(), [](const StableTerm& x, const StableTerm& y) {
            return std::tie(x.orientation, x.m, x.alpha, x.w) < std::tie(y.orientation, y.m, y.alpha, y.w);
        });
        return s;
    }
    if (auto* p = std::get_if<RationalProduct>(&spec)) {
        RationalProduct s = *p;
        check_finite(s.prefactor, "prefactor");
        if (!(s.prefactor > 0)) throw ValidationError("prefactor must be positive", "prefactor");
        for (size_t i = 0; i < s.factors.size(); ++i) {
            const auto& f = s.factors[i];
            check_finite(f.m, idx("factors", i, "m"));
            if (f.m < 0) throw ValidationError("shift must be nonnegative", idx("factors", i, "m"));
            if (f.exponent != 1 && f.exponent != -1) throw ValidationError("exponent must be +1 or -1", idx("factors", i, "exponent"));
        }
        std::stable_sort(s.factors.begin(), s.factors.end(), [](const RationalFactor& x, const RationalFactor& y) {
            return std::tie(x.orientation, x.m, x.exponent) < std::tie(y.orientation, y.m, y.exponent);
        });
        return s;
    }
    PhiRep s = std::get<PhiRep>(spec);
    check_finite(s.c, "c");
    if (!(s.c > 0)) throw ValidationError("constant must be positive", "c");
    const auto& bp = s.phi.breakpoints;
    if (bp.size() < 2) throw ValidationError("at least two breakpoints are required", "phi.breakpoints");
    for (size_t i = 0; i < bp.size(); ++i) {
        check_finite(bp[i], "phi.breakpoints[" + std::to_string(i) + "]");
        if (i > 0 && !(bp[i] > bp[i - 1]))
            throw ValidationError("breakpoints must be strictly increasing", "phi.breakpoints[" + std::to_string(i) + "]");
    }
    size_t want = s.phi.interpolation == Interpolation::piecewise_linear ? bp.size() : bp.size() - 1;
    if (s.phi.values.size() != want) throw ValidationError("wrong number of values", "phi.values");
    for (size_t i = 0; i < s.phi.values.size(); ++i) {
        double v = s.phi.values[i];
        if (!(v >= 0 && v <= kPi)) throw ValidationError("phi must lie in [0, pi]", "phi.values[" + std::to_string(i) + "]");
    }
    return s;
}

ValidationResult validate_spec(const RogersSpec& spec, int n_samples) {
    ValidationResult res;
    res.spec = normalize_spec(spec);
    if (auto* ss = std::get_if<StableSum>(&res.spec)) {
        int active = 0;
        const StableTerm* only = nullptr;
        for (const auto& t : ss->terms)
            if (t.w > 0) ++active, only = &t;
        if (active == 1 && only->alpha > 1) {
            // one-sided alpha-stable exponents leave the admissible wedge
            double ang = only->orientation == Orientation::minus_i ? kPi / 2 - 0.01 : -(kPi / 2 - 0.01);
            throw RogersViolation("single stable term with alpha > 1 is not a Rogers function", std::polar(1.0, ang));
        }
    }
    FnPtr f = make_fn(res.spec);
    int nr = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(std::max(n_samples, 4))))));
    int na = std::max(2, (std::max(n_samples, 4) + nr - 1) / nr);
    const double edge = kPi / 2 - 0.01;
    for (int i = 0; i < nr; ++i) {
        double r = std::pow(10.0, -3.0 + 6.0 * i / (nr - 1));
        for (int k = 0; k < na; ++k) {
            double ang = -edge + 2.0 * edge * k / (na - 1);
            cplx xi = std::polar(r, ang);
            cplx v = f->eval(xi);
            double q = (v / xi).real();
            double tol = 1e-10 * (1.0 + std::abs(v) / r);
            double margin = q + tol;
            res.worst_margin = std::min(res.worst_margin, margin / (1.0 + std::abs(v) / r));
            ++res.n_samples;
            if (!(margin >= 0) || !std::isfinite(q)) {
                std::ostringstream os;
                os << "re(f(xi)/xi) = " << q << " is negative";
                throw RogersViolation(os.str(), xi);
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// evaluation

cplx eval_f(const RogersSpec& spec, cplx xi) {
    if (!std::isfinite(xi.real()) || !std::isfinite(xi.imag())) throw DomainError("non-finite argument", "xi");
    return make_fn(spec)->eval(xi);
}

double levy_density(const RogersSpec& spec, double x) {
    auto* la = std::get_if<LevyAtomic>(&spec);
    if (!la) throw MethodUnsupported("Levy density is available for levy_atomic specs only");
    if (x == 0 || !std::isfinite(x)) throw DomainError("density is defined for x != 0", "x");
    double v = 0;
    for (const auto& at : la->atoms) {
        if ((at.s > 0) == (x > 0)) v += at.w * std::exp(-std::abs(at.s) * std::abs(x));
    }
    return v / kPi;
}

LimitsResult f_limits(const RogersSpec& spec) { return make_fn(spec)->limits(); }

// ---------------------------------------------------------------------------
// boundary angle

std::vector<double> default_eps_ladder(double s) {
    double k = 1.0 + std::abs(s);
    return {1e-3 * k, 1e-4 * k, 1e-5 * k};
}

namespace {

double unwrap_arg(double a, double s) {
    if (s > 0 && a > kPi / 2) a -= 2 * kPi;
    if (s < 0 && a < -kPi / 2) a += 2 * kPi;
    return a;
}

double clamp_phi(double p) { return std::min(kPi, std::max(0.0, p)); }

}  // namespace

double estimate_phi(const RogersFn& f, double s, const std::vector<double>& eps_ladder) {
    if (s == 0 || !std::isfinite(s)) throw DomainError("boundary angle needs s != 0", "s");
    std::vector<double> ladder = eps_ladder.empty() ? default_eps_ladder(s) : eps_ladder;
    for (size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0)) throw ArgumentError("ladder entries must be positive", "eps_ladder");
        if (i > 0 && !(ladder[i] < ladder[i - 1])) throw ArgumentError("ladder must decrease", "eps_ladder");
    }
    std::vector<double> h, v;
    for (double t : ladder) {
        try {
            cplx y = f.eval(cplx(t, -s));
            if (!std::isfinite(y.real()) || !std::isfinite(y.imag()) || y == cplx(0.0)) continue;
            h.push_back(t);
            v.push_back(unwrap_arg(std::arg(y), s));
        } catch (const Error&) {
        }
    }
    if (h.empty()) throw EstimationError("boundary angle evaluation failed at every ladder point");
    double a = extrapolate_to_zero(h, v);
    double sg = s > 0 ? 1.0 : -1.0;
    return clamp_phi(-sg * a);
}

double estimate_phi(const RogersSpec& spec, double s, const std::vector<double>& eps_ladder) {
    return estimate_phi(*make_fn(spec), s, eps_ladder);
}

double boundary_phi(const RogersFn& f, double s) {
    try {
        cplx y = f.eval(cplx(0.0, -s));
        if (std::isfinite(y.real()) && std::isfinite(y.imag()) && y != cplx(0.0)) {
            double sg = s > 0 ? 1.0 : -1.0;
            return clamp_phi(-sg * unwrap_arg(std::arg(y), s));
        }
    } catch (const DomainError&) {
    }
    double k = std::abs(s);
    return estimate_phi(f, s, {1e-6 * k, 1e-7 * k, 1e-8 * k});
}

// ---------------------------------------------------------------------------
// bounds

VerifyReport check_function_bounds(const RogersFn& f, const std::vector<cplx>& samples) {
    VerifyReport rep;
    rep.suite = "function_bounds";
    for (cplx xi : samples) {
        if (!(xi.real() > 0)) {
            rep.record("domain", xi, -1, "sample outside the right half-plane");
            continue;
        }
        cplx v = f.eval(xi);
        double ax = std::arg(xi);
        double d = std::arg(v) - ax;
        rep.record("arg_wedge", xi, kPi / 2 - std::abs(d) + 1e-12);

        double r = std::abs(xi);
        double fr = std::abs(f.eval(r));
        double cosa = xi.real() / r;
        double lower = (1 / std::sqrt(2.0)) * 0.5 * cosa * fr;
        double upper = std::sqrt(2.0) * 2.0 / cosa * fr;
        double av = std::abs(v);
        double m2 = std::min(std::log(av / lower), std::log(upper / av));
        rep.record("magnitude_sandwich", xi, m2 + 1e-12);

        double h = 1e-6 * r;
        cplx der = central_difference([&](cplx z) { return f.eval(z); }, xi, h);
        double bound = kPi / xi.real() * (1 + 1e-3);
        rep.record("log_derivative", xi, 1.0 - std::abs(der / v) / bound);
    }
    return rep;
}

VerifyReport check_function_bounds(const RogersSpec& spec, const std::vector<cplx>& samples) {
    return check_function_bounds(*make_fn(spec), samples);
}

std::vector<cplx> log_polar_samples(int n, double r_lo, double r_hi, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> out;
    double l0 = std::log(r_lo), l1 = std::log(r_hi);
    for (int i = 0; i < n; ++i) {
        double r = std::exp(l0 + (l1 - l0) * rng.uniform());
        double a = (kPi / 2 - 1e-3) * (2 * rng.uniform() - 1);
        out.push_back(std::polar(r, a));
    }
    return out;
}

}  // namespace rogers
