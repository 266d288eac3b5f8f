#include "rogers/errors.hpp"
#include "rogers/fluctuation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rogers;

namespace {

RogersSpec fig(char c) { return load_spec(std::string(ROGERS_DATA_DIR) + "/specs/fig1" + c + ".json"); }

RogersSpec bm(double b = 0) { return LevyAtomic{0.5, b, 0.0, {}}; }

// hyperexponential compound Poisson: atoms (s, rate) with jumps Exp(|s|) in
// the direction of s; the drift is set to the compensator
LevyAtomic cp(const std::vector<std::pair<double, double>>& jumps, double extra_drift = 0, double a = 0) {
    LevyAtomic s{a, extra_drift, 0.0, {}};
    for (auto [sz, rate] : jumps) {
        s.atoms.push_back({sz, rate * kPi * std::abs(sz)});
        s.b += (sz > 0 ? 1.0 : -1.0) * rate / (1 + std::abs(sz));
    }
    return s;
}

double rplus(double b, double tau) { return std::sqrt(b * b + 2 * tau) - b; }
double rminus(double b, double tau) { return std::sqrt(b * b + 2 * tau) + b; }

// exp(int_0^inf (e^-t - e^-tau t) e^-lam t / t dt) by quadrature
double frullani(double tau, double lam) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-12;
    auto q = integrate_adaptive(
        [&](double t) -> cplx {
            if (t < 1e-8) return (tau - 1) * std::exp(-lam * t);
            return (std::exp(-t) - std::exp(-tau * t)) * std::exp(-lam * t) / t;
        },
        Domain::half(0.0), cfg);
    return std::exp(q.value.real());
}

}  // namespace

TEST(KappaRatioXi, BrownianMotion) {
    Fluctuation fl(bm());
    double want = (1 + std::sqrt(2.0)) / (2 + std::sqrt(2.0));
    EXPECT_NEAR(want, 0.707107, 1e-6);
    for (auto m : {WhMethod::bd, WhMethod::spine, WhMethod::phi}) {
        double tol = m == WhMethod::phi ? 1e-4 : 1e-8;
        EXPECT_NEAR(fl.kappa_ratio_xi(1.0, 1.0, 2.0, Side::plus, m).value, want, tol) << method_name(m);
    }
    EXPECT_EQ(fl.kappa_ratio_xi(0.3, 1.7, 1.7, Side::minus).value, 1.0);
}

TEST(KappaRatioXi, DriftedBrownianMotionBothSides) {
    for (double b : {1.0, -0.5}) {
        Fluctuation fl(bm(b));
        double tau = 0.7;
        double p = (0.4 + rplus(b, tau)) / (3 + rplus(b, tau));
        double m = (0.4 + rminus(b, tau)) / (3 + rminus(b, tau));
        EXPECT_NEAR(fl.kappa_ratio_xi(tau, 0.4, 3, Side::plus).value / p, 1, 1e-9);
        EXPECT_NEAR(fl.kappa_ratio_xi(tau, 0.4, 3, Side::minus).value / m, 1, 1e-9);
    }
}

TEST(KappaRatioXi, SpineFallsBackForPureDrift) {
    Fluctuation fl(LevyAtomic{0, 1, 0, {}});
    auto r = fl.kappa_ratio_xi(1.0, 1.0, 2.0, Side::plus, WhMethod::spine);
    EXPECT_NEAR(r.value, 2.0 / 3.0, 1e-9);
    ASSERT_EQ(r.method_chain.size(), 2u);
    EXPECT_EQ(r.method_chain[1], "fallback:bd");
    EXPECT_THROW(kappa_ratio_xi(bm(), 1, 0, 1, Side::plus), DomainError);
}

TEST(KappaRatioTau, BrownianMotion) {
    EXPECT_NEAR(kappa_ratio_tau(bm(), 1e-8, 2, 1, Side::plus).value, std::sqrt(2.0), 1e-7);
    EXPECT_EQ(kappa_ratio_tau(bm(), 1, 3, 3, Side::plus).value, 1.0);
    for (double b : {0.0, 1.0, -1.0})
        for (double xi : {0.0, 0.5, 4.0}) {
            Fluctuation fl(bm(b));
            double p = (xi + rplus(b, 2.5)) / (xi + rplus(b, 0.4));
            double m = (xi + rminus(b, 2.5)) / (xi + rminus(b, 0.4));
            EXPECT_NEAR(fl.kappa_ratio_tau(xi, 2.5, 0.4, Side::plus).value / p, 1, 1e-9) << b << " " << xi;
            EXPECT_NEAR(fl.kappa_ratio_tau(xi, 2.5, 0.4, Side::minus).value / m, 1, 1e-9) << b << " " << xi;
        }
}

TEST(KappaRatioTau, BoundedIsUnsupported) {
    EXPECT_THROW(kappa_ratio_tau(cp({{1.0, 1.0}}), 1, 2, 1, Side::plus), MethodUnsupported);
    EXPECT_THROW(kappa_ratio_tau(bm(), 1, 0, 1, Side::plus), DomainError);
}

TEST(KappaRatioTau, SpineContinuationAgreesOnRealAxis) {
    for (char c : {'a', 'b', 'c', 'd', 'f'}) {
        Fluctuation fl(fig(c));
        for (Side sd : {Side::plus, Side::minus})
            for (double xi : {0.0, 0.8}) {
                auto k = fl.kappa_in_tau(xi, 0.5, sd);
                double a = k(3.0).real();
                double b = fl.kappa_ratio_tau(xi, 3.0, 0.5, sd).value;
                EXPECT_NEAR(a / b, 1, 1e-7) << c << " " << side_name(sd) << " " << xi;
            }
    }
}

TEST(KappaCirc, Examples) {
    EXPECT_EQ(kappa_circ(bm(), 3.0), 1.0);
    EXPECT_EQ(kappa_circ(fig('a'), 0.2), 1.0);
    auto s = cp({{1.0, 1.0}});
    EXPECT_TRUE(jump_summary(s).compound_poisson);
    EXPECT_NEAR(kappa_circ(s, 2.0), 1.5, 1e-12);
    EXPECT_NEAR(frullani(2.0, 1.0), 1.5, 1e-9);
    EXPECT_NEAR(kappa_circ(cp({{-2.0, 0.3}, {0.5, 1.1}}), 1.0), 1.0, 1e-15);
    // a Gaussian part or an off-compensator drift is not compound Poisson
    EXPECT_EQ(kappa_circ(cp({{1.0, 1.0}}, 0.2), 2.0), 1.0);
    EXPECT_EQ(kappa_circ(cp({{1.0, 1.0}}, 0, 0.5), 2.0), 1.0);
}

TEST(KappaCirc, MatchesFrullaniIntegral) {
    auto s = cp({{-0.7, 0.25}, {2.0, 0.75}});
    LevyAtomic killed = s;
    killed.c = 0.4;
    for (double tau : {0.5, 1.0, 2.0, 10.0}) {
        EXPECT_NEAR(kappa_circ(s, tau), frullani(tau, 1.0), 1e-9);
        EXPECT_NEAR(kappa_circ(killed, tau), frullani(tau, 1.4), 1e-9);
    }
}

TEST(PrLaplace, BrownianMotion) {
    EXPECT_EQ(pr_laplace(bm(), 0.5, 0, 0, Side::plus).value, 1.0);
    EXPECT_NEAR(pr_laplace(bm(), 0.5, 0, 1, Side::plus).value, 0.5, 1e-9);
    EXPECT_NEAR(pr_laplace(bm(), 0.5, 1.5, 0, Side::plus).value, 0.5, 1e-9);
    // sqrt(2 sigma) / (xi + sqrt(2 (tau + sigma)))
    EXPECT_NEAR(pr_laplace(bm(), 0.5, 1, 1, Side::minus).value, 1 / (1 + std::sqrt(3.0)), 1e-9);
    EXPECT_THROW(pr_laplace(bm(), 0, 1, 1, Side::plus), DomainError);
}

TEST(PrLaplace, CompoundPoissonRoutes) {
    // the infinity-anchored tau ratio against the spine continuation
    auto s = cp({{-2.0, 0.5}, {1.5, 0.5}});
    Fluctuation fl(s);
    for (Side sd : {Side::plus, Side::minus}) {
        auto k = fl.kappa_in_tau(0.0, 1.5, sd);
        double spine = k(0.5).real();
        double pr = fl.pr_laplace({0.5, 1.0, 0.0, sd}).value;
        EXPECT_NEAR(pr / spine, 1, 1e-7) << side_name(sd);
        EXPECT_GT(pr, 0);
        EXPECT_LT(pr, 1);
    }
    // sup is 0 with positive probability
    double p0 = 1 - fl.sup_tail(0.5, 1e-9).value;
    EXPECT_GT(p0, 0.05);
    EXPECT_NEAR(fl.pr_laplace({0.5, 0, 1e4, Side::plus}).value, p0, 1e-3);
}

TEST(SupTail, BrownianMotionIsExponential) {
    Fluctuation fl(bm());
    double worst = 0;
    for (double x = 0.1; x <= 5 + 1e-9; x += 0.1) worst = std::max(worst, std::abs(fl.sup_tail(0.5, x).value - std::exp(-x)));
    EXPECT_LT(worst, 1e-3);
    EXPECT_NEAR(fl.sup_tail(0.5, 1).value, 0.367879, 1e-3);
    EXPECT_NEAR(fl.sup_tail(0.5, 1e-4).value, 1.0, 1e-3);
    EXPECT_LE(fl.sup_tail(0.5, 20).value, 2.1e-9);
    EXPECT_THROW(fl.sup_tail(0.5, 0), DomainError);
}

TEST(SupTail, DriftedBrownianMotion) {
    // sup over Exp(sigma) is Exp(r+)
    Fluctuation fl(bm(-0.6));
    double r = rplus(-0.6, 0.8);
    for (double x : {0.2, 1.0, 3.0}) EXPECT_NEAR(fl.sup_tail(0.8, x).value, std::exp(-r * x), 1e-4);
    for (double x : {0.2, 1.0, 3.0})
        EXPECT_NEAR(fl.sup_tail(0.8, x, Side::minus).value, std::exp(-rminus(-0.6, 0.8) * x), 1e-4);
}

TEST(SupTail, AgreesWithLaplaceTransform) {
    // int e^{-xi x} P(sup > x) dx = (1 - E e^{-xi sup}) / xi
    auto s = cp({{-2.0, 0.5}, {1.5, 0.5}}, 0, 0.2);
    Fluctuation fl(s);
    double xi = 1.3;
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-6;
    cfg.abs_tol = 1e-8;
    auto q = integrate_adaptive([&](double x) -> cplx { return std::exp(-xi * x) * fl.sup_tail(0.5, x).value; },
                                Domain::finite(1e-6, 40.0), cfg);
    double want = (1 - fl.pr_laplace({0.5, 0, xi, Side::plus}).value) / xi;
    EXPECT_NEAR(q.value.real(), want, 1e-4);
}

TEST(CmCbf, Examples) {
    CmCheckConfig c;
    c.mode = CmMode::cbf_arg;
    c.samples = upper_half_plane_samples(30, 1e-2, 1e2, 3);
    EXPECT_TRUE(cm_cbf_check([](cplx z) { return std::sqrt(z); }, c).passed());
    c.samples = {std::polar(1.0, kPi / 3)};
    auto rep = cm_cbf_check([](cplx z) { return z * z; }, c);
    EXPECT_FALSE(rep.passed());
    EXPECT_NEAR(rep.worst_margin, -kPi / 3 + c.tol, 1e-12);

    CmCheckConfig d;
    for (double x = 0.5; x <= 8; x += 0.5) d.grid.push_back(x);
    EXPECT_TRUE(cm_cbf_check([](cplx x) { return std::exp(-x); }, d).passed());
    EXPECT_FALSE(cm_cbf_check([](cplx x) { return std::exp(-x) * (1.0 + 0.01 * std::sin(3.0 * x)); }, d).passed());

    CmCheckConfig s;
    s.mode = CmMode::stieltjes_arg;
    s.samples = upper_half_plane_samples(30, 1e-2, 1e2, 4);
    EXPECT_TRUE(cm_cbf_check([](cplx z) { return 1.0 / std::sqrt(z) + 1.0 / (z + 2.0); }, s).passed());
    EXPECT_FALSE(cm_cbf_check([](cplx z) { return std::sqrt(z); }, s).passed());
}

TEST(CmCbf, ConfigErrors) {
    CmCheckConfig c;
    c.grid = {1, 0.5};
    EXPECT_THROW(cm_cbf_check([](cplx z) { return z; }, c), ArgumentError);
    c.grid = {1, 2};
    c.order = 1;
    EXPECT_THROW(cm_cbf_check([](cplx z) { return z; }, c), ArgumentError);
    CmCheckConfig a;
    a.mode = CmMode::cbf_arg;
    a.samples = {cplx(1, -1)};
    EXPECT_THROW(cm_cbf_check([](cplx z) { return z; }, a), ArgumentError);
    EXPECT_THROW(parse_cm_mode("cm"), ArgumentError);
}

TEST(Invariants, SpaceTimeFactorization) {
    std::mt19937_64 g(17);
    std::uniform_real_distribution<double> lt(-1, 1), lx(-1.5, 1.5);
    std::vector<RogersSpec> specs;
    for (char c = 'a'; c <= 'h'; ++c) specs.push_back(fig(c));
    specs.push_back(cp({{-2.0, 0.5}, {1.5, 0.5}}));
    specs.push_back(cp({{-1.0, 0.3}, {0.5, 0.9}}, 0.0, 0.4));
    for (size_t k = 0; k < specs.size(); ++k) {
        Fluctuation fl(specs[k]);
        if (fl.fn()->limits().zero_infinite) continue;
        for (int i = 0; i < 10; ++i) {
            double tau = std::pow(10.0, lt(g)), xi = std::pow(10.0, lx(g));
            auto c = space_time_check(fl, tau, xi);
            EXPECT_LT(c.rel_error, 1e-3) << k << " tau=" << tau << " xi=" << xi;
        }
    }
}

TEST(Invariants, CompleteBernsteinInBothVariables) {
    CmCheckConfig c;
    c.mode = CmMode::cbf_arg;
    c.samples = upper_half_plane_samples(30, 1e-2, 1e2, 9);
    for (char f : {'a', 'b', 'e'}) {
        Fluctuation fl(fig(f));
        for (Side sd : {Side::plus, Side::minus}) {
            for (double xi : {0.0, 1.0, 5.0}) {
                auto rep = cm_cbf_check(fl.kappa_in_tau(xi, 1.0, sd), c);
                EXPECT_TRUE(rep.passed()) << f << " tau " << xi << " " << rep.to_json().dump();
            }
            for (double tau : {0.0, 1.0, 5.0}) {
                auto rep = cm_cbf_check(fl.kappa_in_xi(tau, 1.0, sd), c);
                EXPECT_TRUE(rep.passed()) << f << " xi " << tau << " " << rep.to_json().dump();
            }
            // ordered ratio kappa(tau, xi1)/kappa(tau, xi2), xi1 <= xi2, in tau
            for (auto [x1, x2] : {std::pair{0.0, 1.0}, std::pair{0.5, 4.0}}) {
                auto rep = cm_cbf_check(fl.ratio_xi_in_tau(x1, x2, sd), c);
                EXPECT_TRUE(rep.passed()) << f << " ratio " << rep.to_json().dump();
            }
        }
        for (auto [x1, x2] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.3}, std::pair{0.0, 2.0}}) {
            auto rep = cm_cbf_check(fl.product_in_tau(x1, x2), c);
            EXPECT_TRUE(rep.passed()) << f << " product " << rep.to_json().dump();
        }
    }
}

TEST(Invariants, ReversedRatioIsNotBernstein) {
    // kappa(tau, 4)/kappa(tau, 0.5) is Stieltjes in tau, not complete Bernstein
    CmCheckConfig c;
    c.mode = CmMode::cbf_arg;
    c.samples = upper_half_plane_samples(30, 1e-2, 1e2, 9);
    Fluctuation fl(fig('a'));
    EXPECT_FALSE(cm_cbf_check(fl.ratio_xi_in_tau(4.0, 0.5, Side::plus), c).passed());
    c.mode = CmMode::stieltjes_arg;
    EXPECT_TRUE(cm_cbf_check(fl.ratio_xi_in_tau(4.0, 0.5, Side::plus), c).passed());
}

TEST(Invariants, TailsAreCompletelyMonotone) {
    CmCheckConfig d;
    for (double x = 0.25; x <= 4 + 1e-9; x += 0.25) d.grid.push_back(x);
    d.tol = 1e-7;
    for (auto spec : {bm(), bm(0.5), RogersSpec(cp({{-2.0, 0.5}, {1.5, 0.5}})), RogersSpec(cp({{-1.0, 0.3}, {0.5, 0.9}}))}) {
        Fluctuation fl(spec);
        auto rep = cm_cbf_check([&](cplx x) { return cplx(fl.sup_tail(0.5, x.real()).value); }, d);
        EXPECT_TRUE(rep.passed()) << type_name(spec) << " " << rep.to_json().dump();
    }
}

TEST(Invariants, SigmaDomainIsStieltjes) {
    CmCheckConfig s;
    s.mode = CmMode::stieltjes_arg;
    s.samples = upper_half_plane_samples(30, 1e-2, 1e2, 12);
    CmCheckConfig d;
    for (double x = 0.25; x <= 4 + 1e-9; x += 0.25) d.grid.push_back(x);
    d.tol = 1e-9;
    for (auto spec : {bm(), bm(-0.5), RogersSpec(cp({{-2.0, 0.5}, {1.5, 0.5}}))}) {
        Fluctuation fl(spec);
        for (double xi : {0.5, 2.0}) {
            auto h = fl.laplace_in_sigma(xi, Side::plus);
            EXPECT_TRUE(cm_cbf_check(h, s).passed()) << type_name(spec);
            auto rep = cm_cbf_check(h, d);
            EXPECT_TRUE(rep.passed()) << type_name(spec) << " " << rep.to_json().dump();
        }
    }
    // BM: sqrt(2 s) / (s (xi + sqrt(2 s)))
    Fluctuation fl(bm());
    auto h = fl.laplace_in_sigma(1.0, Side::plus);
    cplx sg(0.3, 0.8);
    cplx want = std::sqrt(2.0 * sg) / (sg * (1.0 + std::sqrt(2.0 * sg)));
    EXPECT_NEAR(std::abs(h(sg) - want), 0, 1e-8);
}
