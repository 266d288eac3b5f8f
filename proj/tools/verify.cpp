#include "cli.hpp"

#include "rogers/errors.hpp"
#include "rogers/fluctuation.hpp"
#include "rogers/montecarlo.hpp"
#include "rogers/spine.hpp"
#include "rogers/wiener_hopf.hpp"

#include <cmath>

namespace rogers::cli {

namespace {

// margin of a relative error against tol, scaled so that 1 means exact
double rel_margin(double err, double tol) { return (tol - err) / tol; }

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

VerifyReport core_suite(const RogersSpec& spec, const SuiteOptions& opt) {
    VerifyReport rep;
    try {
        auto v = validate_spec(spec);
        rep.record("rogers_property", 0.0, v.worst_margin, v.method);
    } catch (const RogersViolation& e) {
        rep.record("rogers_property", e.witness, -1, e.what());
        return rep;
    }
    rep.merge(check_function_bounds(spec, log_polar_samples(200, 1e-3, 1e3, opt.seed)));

    RogersSpec norm = normalize_spec(spec);
    bool same = spec_to_json(normalize_spec(spec_from_json(spec_to_json(norm)))) == spec_to_json(norm);
    rep.record("round_trip", 0.0, same ? 1.0 : -1.0);

    // conjugate symmetry f(-conj xi) = conj f(xi)
    double tol = opt.tol.value_or(1e-12);
    for (cplx xi : log_polar_samples(20, 1e-2, 1e2, opt.seed + 1)) {
        cplx a = eval_f(spec, -std::conj(xi)), b = std::conj(eval_f(spec, xi));
        rep.record("symmetry", xi, rel_margin(std::abs(a - b) / std::max(std::abs(b), 1e-300), tol));
    }
    return rep;
}

VerifyReport spine_suite(const RogersSpec& spec) {
    auto table = build_spine_table(spec, 1e-3, 1e3, 400);
    return spine_invariant_report(table, spec);
}

VerifyReport wh_suite(const RogersSpec& spec, const SuiteOptions& opt) {
    double tol = opt.tol.value_or(1e-3);
    VerifyReport rep = factorization_check(spec, log_polar_samples(20, 1e-2, 1e2, opt.seed), tol);
    WhSolver solver(make_fn(spec));
    for (Side side : {Side::plus, Side::minus})
        for (auto [x1, x2] : {std::pair{1.0, 2.0}, std::pair{0.5, 4.0}}) {
            double ref = solver.ratio(WhMethod::bd, side, 0, x1, x2).value;
            for (WhMethod m : {WhMethod::spine, WhMethod::phi}) {
                std::string name = std::string("ratio_") + method_name(m) + "_vs_bd";
                try {
                    double v = solver.ratio(m, side, 0, x1, x2).value;
                    rep.record(name, cplx(x1, x2), rel_margin(rel_err(v, ref), tol), side_name(side));
                } catch (const MethodUnsupported&) {
                } catch (const SpineUndefined&) {
                }
            }
        }
    return rep;
}

VerifyReport fluct_suite(const RogersSpec& spec, const SuiteOptions& opt) {
    double tol = opt.tol.value_or(1e-3);
    VerifyReport rep;
    Fluctuation fl(spec);

    CmCheckConfig cbf;
    cbf.mode = CmMode::cbf_arg;
    cbf.samples = upper_half_plane_samples(30, 1e-2, 1e2, opt.seed);
    for (Side side : {Side::plus, Side::minus}) {
        try {
            rep.merge(cm_cbf_check(fl.kappa_in_xi(1.0, 1.0, side), cbf));
            rep.merge(cm_cbf_check(fl.kappa_in_tau(1.0, 1.0, side), cbf));
        } catch (const SpineUndefined&) {
        }
    }

    Rng rng(opt.seed + 7);
    for (int i = 0; i < 5; ++i) {
        double tau = std::pow(10.0, 2 * rng.uniform() - 1);
        double xi = std::pow(10.0, 2 * rng.uniform() - 1);
        auto st = space_time_check(fl, tau, xi);
        rep.record("space_time", cplx(tau, xi), rel_margin(st.rel_error, tol));
    }

    CmCheckConfig cm;
    cm.grid = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0};
    cm.tol = 1e-7;
    try {
        rep.merge(cm_cbf_check([&](cplx x) { return cplx(fl.sup_tail(1.0, x.real()).value); }, cm));
    } catch (const InversionInstability& e) {
        rep.record("sup_tail", 0.0, -1, e.what());
    }
    return rep;
}

VerifyReport mc_suite(const RogersSpec& spec, const SuiteOptions& opt) {
    if (!std::holds_alternative<LevyAtomic>(spec))
        throw MethodUnsupported("the mc suite needs a levy_atomic spec, got " + type_name(spec));
    double tol = opt.tol.value_or(0.0);
    double sigma = 1.0;
    auto set = simulate_sup_samples(spec, sigma, opt.mc_n, opt.seed);
    Fluctuation fl(spec);
    std::vector<McQuery> q;
    for (double xi : {0.5, 1.0, 2.0})
        for (double tau : {0.0, 1.0}) q.push_back(McQuery::joint(xi, tau));
    for (double x = 0; x <= 4; x += 0.5) q.push_back(McQuery::tail(x));
    auto est = mc_estimates(set, q);

    VerifyReport rep;
    for (size_t i = 0; i < 6; ++i) {
        double want = fl.pr_laplace({sigma, q[i].tau, q[i].xi, Side::plus}).value;
        double band = 3 * est[i].std_error + tol;
        rep.record("joint_transform", cplx(q[i].xi, q[i].tau),
                   band > 0 ? (band - std::abs(est[i].mean - want)) / band : -1);
    }
    for (size_t i = 7; i < est.size(); ++i)
        rep.record("tail_monotone", q[i].x, est[i].mean <= est[i - 1].mean ? 1.0 : -1.0);
    return rep;
}

}  // namespace

VerifyReport run_suite(const std::string& suite, const RogersSpec& spec, const SuiteOptions& opt) {
    VerifyReport rep;
    if (suite == "core")
        rep = core_suite(spec, opt);
    else if (suite == "spine")
        rep = spine_suite(spec);
    else if (suite == "wh")
        rep = wh_suite(spec, opt);
    else if (suite == "fluct")
        rep = fluct_suite(spec, opt);
    else if (suite == "mc")
        rep = mc_suite(spec, opt);
    else
        throw ArgumentError("unknown suite '" + suite + "'", "suite");
    rep.suite = suite;
    return rep;
}

}  // namespace rogers::cli
