#include "rogers/core.hpp"
#include "rogers/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rogers;

namespace {

RogersSpec fig(char c) { return load_spec(std::string(ROGERS_DATA_DIR) + "/specs/fig1" + c + ".json"); }

RogersSpec square() { return LevyAtomic{1.0, 0.0, 0.0, {}}; }

RogersSpec drift_only() { return LevyAtomic{0.0, 1.0, 0.0, {}}; }

// bounded xi/(xi+i): one atom at s=1 with weight pi and the compensating drift
RogersSpec bounded_atom() { return LevyAtomic{0.0, 0.5, 0.0, {{1.0, kPi}}}; }

RogersSpec hyperexp() {
    return LevyAtomic{0.3, 0.2, 0.1, {{-2.0, 1.5}, {0.7, 0.4}, {3.0, 2.0}}};
}

// piecewise-constant phi: pi on s>0 beyond a gap, a smaller plateau on s<0
RogersSpec phi_rep() {
    PhiRep p;
    p.c = 1.5;
    p.phi.interpolation = Interpolation::piecewise_linear;
    p.phi.breakpoints = {-50, -5, -2, -1, 0, 0.5, 1, 4, 40};
    p.phi.values = {0.4, 0.4, 1.2, 1.0, 0.8, 1.5, 2.0, 2.8, 2.8};
    return p;
}

std::vector<RogersSpec> all_specs() {
    std::vector<RogersSpec> v;
    for (char c = 'a'; c <= 'h'; ++c) v.push_back(fig(c));
    v.push_back(square());
    v.push_back(bounded_atom());
    v.push_back(hyperexp());
    v.push_back(phi_rep());
    return v;
}

}  // namespace

// ==== validate_spec =========================================================

TEST(Validate, AcceptsFigureSpecs) {
    for (char c = 'a'; c <= 'h'; ++c) {
        auto r = validate_spec(fig(c), 400);
        EXPECT_EQ(r.method, "sampled");
        EXPECT_GE(r.n_samples, 400) << c;
    }
}

TEST(Validate, RejectsOneSidedStableAboveOne) {
    StableSum s{{{1.0, 0.0, 1.5, Orientation::minus_i}}};
    try {
        validate_spec(s, 100);
        FAIL() << "expected a Rogers violation";
    } catch (const RogersViolation& e) {
        // the witness must actually violate re(f/xi) >= 0
        cplx w = e.witness;
        EXPECT_LT((eval_f(s, w) / w).real(), 0.0);
    }
}

TEST(Validate, DenseSamplingFindsNegativityNearTheAxis) {
    // oracle: re(f/xi) sampled densely at arg xi = pi/2 - 0.01
    StableSum s{{{1.0, 0.0, 1.5, Orientation::minus_i}}};
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        cplx xi = std::polar(std::pow(10.0, -2 + 0.08 * k), kPi / 2 - 0.01);
        worst = std::min(worst, (eval_f(s, xi) / xi).real());
    }
    EXPECT_LT(worst, 0.0);
}

TEST(Validate, StructuralErrorsNameTheField) {
    LevyAtomic bad{0.5, 1, 0, {{1.0, 2.0}, {2.0, -1.0}}};
    try {
        validate_spec(bad);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "atoms[1].w");
    }
    StableSum alpha{{{1.0, 0.0, 2.5, Orientation::plus_i}}};
    try {
        validate_spec(alpha);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "terms[0].alpha");
    }
    PhiRep p = std::get<PhiRep>(phi_rep());
    p.phi.values[3] = 4.0;
    try {
        validate_spec(p);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "phi.values[3]");
    }
}

TEST(Validate, CanonicalOrderingIsIdempotent) {
    LevyAtomic s{0.1, 0.0, 0.0, {{3.0, 1.0}, {-1.0, 2.0}, {0.5, 1.0}}};
    auto a = std::get<LevyAtomic>(validate_spec(s).spec);
    ASSERT_EQ(a.atoms.size(), 3u);
    EXPECT_EQ(a.atoms[0].s, -1.0);
    EXPECT_EQ(a.atoms[2].s, 3.0);
    auto b = std::get<LevyAtomic>(validate_spec(a).spec);
    EXPECT_EQ(spec_to_json(a), spec_to_json(b));
}

TEST(SpecJson, RoundTrip) {
    for (const auto& s : all_specs()) {
        auto j = spec_to_json(normalize_spec(s));
        auto back = normalize_spec(spec_from_json(j));
        EXPECT_EQ(j, spec_to_json(back));
    }
}

TEST(SpecJson, UnknownTypeIsReported) {
    nlohmann::json j = {{"type", "meromorphic"}};
    try {
        spec_from_json(j);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.field(), "type");
    }
}

// ==== eval_f ================================================================

TEST(Eval, BrownianMotionWithDrift) {
    cplx v = eval_f(fig('a'), 1.0);
    EXPECT_NEAR(v.real(), 0.5, 1e-15);
    EXPECT_NEAR(v.imag(), -1.0, 1e-15);
}

TEST(Eval, StableSumAtOne) {
    cplx v = eval_f(fig('b'), 1.0);
    EXPECT_NEAR(v.real(), 3 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(v.imag(), -1 / std::sqrt(2.0), 1e-14);
}

TEST(Eval, SingleAtom) {
    LevyAtomic s{0, 0, 0, {{1.0, kPi}}};
    cplx v = eval_f(s, 1.0);
    EXPECT_NEAR(v.real(), 0.5, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(Eval, ConjugationSymmetry) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> U(-3, 3);
    for (const auto& s : all_specs()) {
        for (int i = 0; i < 100; ++i) {
            cplx xi(std::exp(U(gen)), U(gen) * std::exp(U(gen)));
            cplx a = eval_f(s, -std::conj(xi)), b = std::conj(eval_f(s, xi));
            EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(b));
        }
    }
}

TEST(Eval, PhiRepOutsideDomainOnAxis) {
    // phi > 0 at s = 2, so -2i is outside the domain
    EXPECT_THROW(eval_f(phi_rep(), cplx(0, -2)), DomainError);
    PhiRep p;
    p.c = 2;
    p.phi.interpolation = Interpolation::piecewise_constant;
    p.phi.breakpoints = {-1, 0, 3};
    p.phi.values = {0.0, kPi};
    // phi vanishes for s < 0, so i*y with y > 0 is inside the domain
    cplx v = eval_f(p, cplx(0, 0.5));
    EXPECT_GT(v.real(), 0);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12 * v.real());
    EXPECT_THROW(eval_f(p, cplx(0, -1)), DomainError);
}

TEST(Eval, PhiRepMatchesDirectQuadrature) {
    // oracle: the exponential representation integrated by adaptive quadrature
    auto s = std::get<PhiRep>(phi_rep());
    std::vector<double> sing = s.phi.breakpoints;
    auto direct = [&](cplx xi) {
        QuadratureConfig cfg;
        cfg.singular_points = sing;
        cfg.rel_tol = 1e-12;
        cfg.max_subdivisions = 20000;
        auto r = integrate_adaptive(
            [&](double t) -> cplx {
                if (t == 0) return 0.0;
                return (xi / (xi + cplx(0, t)) - 1.0 / (1.0 + std::abs(t))) * s.phi(t) / std::abs(t);
            },
            Domain::full(), cfg);
        return s.c * std::exp(r.value / kPi);
    };
    for (cplx xi : {cplx(1, 0), cplx(0.3, 2.0), cplx(2.0, -0.7), cplx(0.05, 0.2), cplx(7, 3)}) {
        cplx a = eval_f(s, xi), b = direct(xi);
        EXPECT_LE(std::abs(a - b), 1e-8 * std::abs(b)) << xi;
    }
}

TEST(Eval, LevyKhintchineConsistency) {
    // oracle: eval_f against direct integration of the Levy-Khintchine form
    auto spec = hyperexp();
    const auto& la = std::get<LevyAtomic>(spec);
    for (int k = 0; k < 10; ++k) {
        double xi = -3.0 + 0.65 * k + 0.1;
        QuadratureConfig cfg;
        cfg.singular_points = {0.0};
        cfg.rel_tol = 1e-12;
        cfg.max_subdivisions = 20000;
        auto r = integrate_adaptive(
            [&](double x) -> cplx {
                if (x == 0) return 0.0;
                double sg = x > 0 ? 1.0 : -1.0;
                cplx g = 1.0 - std::exp(cplx(0, xi * x)) + cplx(0, xi * (1 - std::exp(-std::abs(x))) * sg);
                return g * levy_density(spec, x);
            },
            Domain::full(), cfg);
        cplx lk = la.a * xi * xi - cplx(0, la.b * xi) + la.c + r.value;
        cplx v = eval_f(spec, xi);
        EXPECT_LE(std::abs(v - lk), 1e-6 * std::abs(v)) << xi;
    }
}

// ==== levy_density ==========================================================

TEST(LevyDensity, Examples) {
    LevyAtomic one{0, 0, 0, {{1.0, kPi}}};
    EXPECT_NEAR(levy_density(one, 1.0), std::exp(-1.0), 1e-15);
    LevyAtomic neg{0, 0, 0, {{-2.0, 2 * kPi}}};
    EXPECT_EQ(levy_density(neg, 1.0), 0.0);
    EXPECT_NEAR(levy_density(neg, -1.0), 2 * std::exp(-2.0), 1e-15);
    EXPECT_THROW(levy_density(neg, 0.0), DomainError);
    EXPECT_THROW(levy_density(fig('b'), 1.0), MethodUnsupported);
}

// ==== f_limits ==============================================================

TEST(Limits, Examples) {
    auto sq = f_limits(square());
    EXPECT_EQ(sq.f_at_zero, 0.0);
    EXPECT_TRUE(sq.infinity_infinite);
    auto b = f_limits(bounded_atom());
    EXPECT_NEAR(b.f_at_zero, 0.0, 1e-15);
    EXPECT_FALSE(b.infinity_infinite);
    EXPECT_NEAR(b.f_at_infinity, 1.0, 1e-15);
    auto c = f_limits(fig('c'));
    EXPECT_NEAR(c.f_at_zero, 1 + 3 * std::sqrt(19.0), 1e-12);
}

TEST(Limits, ConsistentWithEvaluation) {
    for (const auto& s : all_specs()) {
        auto L = f_limits(s);
        if (!L.zero_infinite && L.f_at_zero > 0) {
            double v = std::abs(eval_f(s, 1e-9));
            EXPECT_NEAR(v, L.f_at_zero, 1e-6 * L.f_at_zero);
        }
        if (!L.infinity_infinite && L.f_at_infinity > 0) {
            double v = std::abs(eval_f(s, 1e9));
            EXPECT_NEAR(v, L.f_at_infinity, 1e-6 * L.f_at_infinity);
        }
        if (L.infinity_infinite) EXPECT_GT(std::abs(eval_f(s, 1e9)), 1e3);
        if (L.f_at_zero <= L.f_at_infinity || L.infinity_infinite) SUCCEED();
        else ADD_FAILURE() << "f(0+) exceeds f(inf)";
    }
}

TEST(Limits, PhiRepMatchesEvaluation) {
    PhiRep p;
    p.c = 2;
    p.phi.interpolation = Interpolation::piecewise_constant;
    p.phi.breakpoints = {-4, -3, -1, 1, 2, 5};
    p.phi.values = {0.0, 0.7, 0.0, 1.1, 0.0};
    auto L = f_limits(p);
    EXPECT_NEAR(L.f_at_zero, std::abs(eval_f(p, 1e-10)), 1e-8);
    EXPECT_NEAR(L.f_at_infinity, std::abs(eval_f(p, 1e10)), 1e-6);
}

// ==== estimate_phi ==========================================================

TEST(EstimatePhi, Square) {
    for (double s : {-3.0, -0.1, 0.2, 5.0}) EXPECT_NEAR(estimate_phi(square(), s), kPi, 1e-6);
}

TEST(EstimatePhi, PureDrift) {
    EXPECT_NEAR(estimate_phi(drift_only(), 1.0), kPi, 1e-6);
    EXPECT_NEAR(estimate_phi(drift_only(), -1.0), 0.0, 1e-6);
}

TEST(EstimatePhi, StableSum) {
    EXPECT_NEAR(estimate_phi(fig('b'), 1.0), std::atan(2.0), 1e-5);
    EXPECT_NEAR(estimate_phi(fig('b'), -1.0), std::atan(0.5), 1e-5);
    EXPECT_NEAR(std::atan(2.0) / kPi, 0.352416, 1e-6);
}

TEST(EstimatePhi, PhiRepRoundTrip) {
    auto spec = phi_rep();
    const auto& t = std::get<PhiRep>(spec).phi;
    for (size_t k = 0; k + 1 < t.breakpoints.size(); ++k) {
        double mid = 0.5 * (t.breakpoints[k] + t.breakpoints[k + 1]);
        if (mid == 0) continue;
        EXPECT_NEAR(estimate_phi(spec, mid), t(mid), 5e-3) << mid;
    }
}

TEST(EstimatePhi, BoundaryValueAgreesWithLadder) {
    auto f = make_fn(fig('c'));
    for (double s : {-30.0, -10.0, 0.5, 3.0}) EXPECT_NEAR(boundary_phi(*f, s), estimate_phi(*f, s), 1e-4);
}

// ==== check_function_bounds =================================================

TEST(Bounds, BrownianMotionPasses) {
    auto rep = check_function_bounds(fig('a'), log_polar_samples(100, 1e-2, 1e2, 1));
    EXPECT_EQ(rep.n_failures, 0);
    EXPECT_EQ(rep.n_checks, 300);
}

TEST(Bounds, DriftIsBoundaryTight) {
    auto rep = check_function_bounds(drift_only(), log_polar_samples(50, 1e-2, 1e2, 2));
    EXPECT_EQ(rep.n_failures, 0);
    EXPECT_LT(rep.worst_margin, 1e-9);
}

TEST(Bounds, AllSpecsPass) {
    for (const auto& s : all_specs()) {
        auto rep = check_function_bounds(s, log_polar_samples(60, 1e-2, 1e2, 3));
        EXPECT_EQ(rep.n_failures, 0) << type_name(s);
    }
}

TEST(Bounds, CorruptedSpecFails) {
    LevyAtomic bad{0, 0, 0, {{1.0, -kPi}, {-0.5, -2.0}}};
    auto f = make_fn(bad);
    auto rep = check_function_bounds(*f, log_polar_samples(100, 1e-2, 1e2, 4));
    EXPECT_GE(rep.n_failures, 1);
    EXPECT_FALSE(rep.witnesses.empty());
}
