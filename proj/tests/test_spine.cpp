#include "rogers/errors.hpp"
#include "rogers/spine.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rogers;

namespace {

RogersSpec fig(char c) { return load_spec(std::string(ROGERS_DATA_DIR) + "/specs/fig1" + c + ".json"); }

RogersSpec square() { return LevyAtomic{1.0, 0.0, 0.0, {}}; }

RogersSpec hyperexp() { return LevyAtomic{0.3, 0.2, 0.1, {{-2.0, 1.5}, {0.7, 0.4}, {3.0, 2.0}}}; }

}  // namespace

TEST(Theta, Examples) {
    EXPECT_NEAR(theta_at(square(), 0.3), 0.0, 1e-12);
    EXPECT_NEAR(theta_at(square(), 7.0), 0.0, 1e-12);
    EXPECT_NEAR(theta_at(fig('a'), std::sqrt(2.0)), kPi / 4, 1e-10);
    EXPECT_EQ(theta_at(fig('a'), 0.5), kPi / 2);
}

TEST(Theta, ConstantSpecHasNoSpine) {
    EXPECT_THROW(theta_at(LevyAtomic{0, 0, 2.0, {}}, 1.0), SpineUndefined);
}

TEST(Theta, SignRuleOnRays) {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> lr(-3, 3), al(-kPi / 2 + 1e-3, kPi / 2 - 1e-3);
    for (char c : {'a', 'b', 'c', 'e', 'g'}) {
        auto f = make_fn(fig(c));
        for (int i = 0; i < 20; ++i) {
            double r = std::pow(10.0, lr(g)), a = al(g);
            double th = theta_at(*f, r);
            double v = std::arg(f->eval(std::polar(r, a)));
            if (std::abs(v) <= 1e-9) continue;
            EXPECT_EQ(v > 0, a > th) << c << " r=" << r << " a=" << a;
        }
    }
}

TEST(Lambda, Examples) {
    EXPECT_NEAR(lambda_at(square(), 2.0), 4.0, 1e-12);
    EXPECT_NEAR(lambda_at(fig('a'), std::sqrt(2.0)), 1.0, 1e-10);
    EXPECT_NEAR(lambda_at(fig('a'), 0.5), 0.375, 1e-12);
}

TEST(Table, Fig1aLineSpine) {
    auto t = build_spine_table(fig('a'), 0.1, 10, 200);
    ASSERT_EQ(t.z_intervals.size(), 1u);
    EXPECT_NEAR(t.z_intervals[0].first, 1.0, 1e-9);
    EXPECT_EQ(t.z_intervals[0].second, 10.0);
    double worst = 0;
    for (const auto& p : t.points) {
        EXPECT_NEAR(std::abs(p.zeta), p.r, 1e-12 * p.r);
        if (p.in_Z) worst = std::max(worst, std::abs(p.theta - std::asin(1 / p.r)));
    }
    EXPECT_LT(worst, 1e-8);
    for (double m : t.boundary_mismatch) EXPECT_LT(m, 1e-6);
}

TEST(Table, SquareIsRealAxis) {
    auto t = build_spine_table(square(), 0.01, 100, 64);
    ASSERT_EQ(t.z_intervals.size(), 1u);
    for (const auto& p : t.points) {
        EXPECT_TRUE(p.in_Z);
        EXPECT_NEAR(p.theta, 0, 1e-12);
        EXPECT_NEAR(p.lambda, p.r * p.r, 1e-12 * p.r * p.r);
    }
}

TEST(Table, StableSumHasConstantAngle) {
    auto t = build_spine_table(fig('b'), 1e-3, 1e3, 64);
    for (const auto& p : t.points) EXPECT_NEAR(p.theta, t.points[0].theta, 1e-9);
}

TEST(Table, Fig1gHasThreeComponents) {
    auto t = build_spine_table(fig('g'), 1e-4, 1e4, 2000);
    EXPECT_EQ(t.z_intervals.size(), 3u);
    auto rep = spine_invariant_report(t, fig('g'));
    EXPECT_TRUE(rep.passed()) << rep.to_json().dump();
}

TEST(Table, LambdaStrictlyIncreasesOnZ) {
    for (char c : {'a', 'c', 'd', 'f'}) {
        auto t = build_spine_table(fig(c), 1e-3, 1e3, 128);
        for (size_t k = 0; k + 1 < t.points.size(); ++k)
            if (t.points[k].in_Z && t.points[k + 1].in_Z) {
                double q = (t.points[k + 1].lambda - t.points[k].lambda) / (t.points[k + 1].r - t.points[k].r);
                EXPECT_GT(q, 0) << c;
                EXPECT_TRUE(std::isfinite(q));
            }
    }
}

TEST(Table, ProfileEndpointsApproachLimits) {
    for (char c : {'c', 'e', 'f'}) {
        auto spec = fig(c);
        auto lim = f_limits(spec);
        auto t = build_spine_table(spec, 1e-9, 1e9, 64);
        if (!lim.zero_infinite && lim.f_at_zero > 0)
            EXPECT_NEAR(t.points.front().lambda / lim.f_at_zero, 1.0, 1e-4) << c;
        if (!lim.infinity_infinite)
            EXPECT_NEAR(t.points.back().lambda / lim.f_at_infinity, 1.0, 1e-4) << c;
    }
}

TEST(Classify, Examples) {
    EXPECT_EQ(classify_point(fig('a'), cplx(1, 2)), Region::D_plus);
    EXPECT_EQ(classify_point(fig('a'), cplx(1, 0)), Region::D_minus);
    EXPECT_EQ(classify_point(square(), cplx(0, 3)), Region::D_plus);
    EXPECT_EQ(classify_point(fig('a'), cplx(-1, 2)), Region::D_plus);
    EXPECT_EQ(classify_point(fig('a'), cplx(0, 0.5)), Region::D_minus);
    EXPECT_THROW(classify_point(fig('a'), cplx(0, 0)), DomainError);
}

TEST(Classify, MidpointProbesAgreeWithANeighbour) {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> al(-kPi / 2 + 1e-3, kPi / 2 - 1e-3);
    for (char c : {'a', 'c', 'f', 'g'}) {
        auto f = make_fn(fig(c));
        auto t = build_spine_table(*f, 1e-2, 1e2, 128);
        for (size_t k = 0; k + 1 < t.points.size(); ++k) {
            double a = al(g);
            double r0 = t.points[k].r, r1 = t.points[k + 1].r, rm = std::sqrt(r0 * r1);
            Region m = classify_point(*f, std::polar(rm, a));
            Region lo = classify_point(*f, std::polar(r0, a));
            Region hi = classify_point(*f, std::polar(r1, a));
            EXPECT_TRUE(m == lo || m == hi) << c << " r=" << rm << " a=" << a;
        }
    }
}

TEST(Invariants, BuiltInFamiliesPass) {
    for (char c = 'a'; c <= 'h'; ++c) {
        auto spec = fig(c);
        auto t = build_spine_table(spec, 1e-3, 1e3, 256);
        auto rep = spine_invariant_report(t, spec);
        EXPECT_TRUE(rep.passed()) << c << " " << rep.to_json().dump();
        EXPECT_GT(rep.n_checks, 0);
    }
    auto t = build_spine_table(square(), 1e-2, 1e2, 64);
    EXPECT_TRUE(spine_invariant_report(t, square()).passed());
}

TEST(Invariants, SmallTableIsReported) {
    auto t = build_spine_table(square(), 1e-2, 1e2, 16);
    EXPECT_FALSE(spine_invariant_report(t, square()).passed());
}

TEST(Measure, ProfileIncrementMatchesLimits) {
    // sum a (1/(t1+l) - 1/(t2+l)) with g = 1 telescopes to log((t2+f0)/(t1+f0))
    for (auto spec : {fig('a'), fig('c'), fig('d'), fig('g'), fig('h'), hyperexp()}) {
        SCOPED_TRACE(type_name(spec));
        auto f = make_fn(spec);
        SpineMeasure m(f);
        auto nodes = m.discretize([](const SpinePoint&) { return 1.0; }, {});
        double f0 = f->limits().f_at_zero;
        double t1 = 0.5, t2 = 3.0;
        double got = (nodes.sum(t1) - nodes.sum(t2)).real();
        EXPECT_NEAR(got, std::log((t2 + f0) / (t1 + f0)), 1e-8);
    }
}
