#include "../oracles.hpp"

#include "hardylab/hardy_spaces.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace hardylab;

namespace {

const ArcSpec full = ArcSpec::full_circle();

FunctionExpr pw(double omega, double gamma, cplx scale = 1.0)
{
    return FunctionExpr::power(PowerSingularity::make(omega, gamma, scale));
}

MetricParams params(double p, ArcSpec arc = full, int k_max = 10)
{
    MetricParams mp;
    mp.p = p;
    mp.arc = arc;
    mp.sweep = default_sweep(k_max);
    return mp;
}

} // namespace

TEST_SUITE("hardy_spaces")
{
    TEST_CASE("metric examples")
    {
        const FunctionExpr f = pw(0.0, 1.0);
        for (double p : {0.5, 2.0})
            CHECK(metric_dp(f, f, params(p)).value == 0.0);
        const cplx c{3.0, 4.0};
        CHECK(metric_dp(FunctionExpr::constant(c), FunctionExpr::zero(), params(0.5)).value ==
              doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
        CHECK(metric_dp(FunctionExpr::constant(c), FunctionExpr::zero(), params(2.0)).value ==
              doctest::Approx(5.0).epsilon(1e-14));
        const double d1 = metric_dp(f, FunctionExpr::zero(), params(0.5, full, 14)).value;
        const double d2 = metric_dp(cplx{0.3} * f, FunctionExpr::zero(), params(0.5, full, 14)).value;
        CHECK(std::abs(d2 - std::sqrt(0.3) * d1) <= 1e-10 * d2);
    }

    TEST_CASE("metric sweep value matches the series oracle")
    {
        // the full-circle mean is increasing in r, so the sup is the last row
        const auto mp = params(0.5, full, 12);
        const double r = mp.sweep.radii().back();
        CHECK(metric_dp(pw(0.0, 1.0), FunctionExpr::zero(), mp).value ==
              doctest::Approx(oracle::power_circle_mean(0.5, r)).epsilon(1e-9));
    }

    TEST_CASE("escaping metrics are infinite")
    {
        const MetricEstimate e = metric_dp(pw(0.0, 1.0), FunctionExpr::zero(), params(2.0, full, 12));
        CHECK(e.escaping);
        CHECK(std::isinf(e.value));
        CHECK(std::isfinite(e.boundary_part));
        const MetricEstimate s = metric_dp(pw(0.0, 1.0), FunctionExpr::zero(), params(infinite_exponent, ArcSpec(-0.2, 0.2), 12));
        CHECK(s.escaping);
        const MetricEstimate b = metric_dp(pw(0.0, 1.0), FunctionExpr::zero(), params(infinite_exponent, ArcSpec(1.0, 2.0), 12));
        CHECK_FALSE(b.escaping);
    }

    TEST_CASE("localized metrics add the compact-disc series")
    {
        const FunctionExpr f = FunctionExpr::constant(2.0);
        const MetricEstimate e = metric_dp(f, FunctionExpr::zero(), params(1.0, ArcSpec(0.0, 1.0)));
        double want = 0.0;
        for (int n = 2; n <= 9; ++n)
            want += std::ldexp(2.0 / 3.0, -n);
        CHECK(e.compact_part == doctest::Approx(want).epsilon(1e-14));
        CHECK(e.value == doctest::Approx(2.0 + want).epsilon(1e-14));
        CHECK(metric_dp(f, FunctionExpr::zero(), params(1.0)).compact_part == 0.0);
        MetricParams bad = params(1.0);
        bad.compact_sup_terms = 0;
        CHECK_THROWS_AS(metric_dp(f, f, bad), std::invalid_argument);
    }

    TEST_CASE("intersection metric examples")
    {
        const FunctionExpr f = pw(0.0, 1.0);
        const IntersectionParams ip{1.0, {0.5, 0.75, 0.9}};
        const auto base = params(1.0);
        CHECK(metric_intersection(f, f, ip, base).value == 0.0);
        const MetricEstimate e = metric_intersection(f, FunctionExpr::zero(), ip, base);
        CHECK_FALSE(e.escaping);
        CHECK(e.value > 0.0);
        CHECK(e.value < 1.0 - std::ldexp(1.0, -3));
        const MetricEstimate b = metric_intersection(FunctionExpr::constant(100.0), FunctionExpr::zero(), ip, base);
        CHECK(b.value < 1.0);
        CHECK_THROWS_AS(metric_intersection(f, f, IntersectionParams{1.0, {0.5, 0.5}}, base), std::invalid_argument);
        CHECK_THROWS_AS(metric_intersection(f, f, IntersectionParams{1.0, {0.5, 1.0}}, base), std::invalid_argument);
    }

    TEST_CASE("closed-form membership")
    {
        CHECK(closed_form_membership(PowerSingularity::make(0.0, 1.0), 0.5) == ClosedFormMembership::Member);
        CHECK(closed_form_membership(PowerSingularity::make(0.0, 2.0), 0.5) == ClosedFormMembership::NonMember);
        CHECK(closed_form_membership(PowerSingularity::make(0.0, 1.75), 0.5) == ClosedFormMembership::Member);
        CHECK(closed_form_membership(PowerSingularity::make(0.0, 1.0), 1.0 + 1e-12) == ClosedFormMembership::Boundary);
        CHECK(closed_form_membership(PowerSingularity::make(0.0, 1.0), 1.0) == ClosedFormMembership::NonMember);
        CHECK(to_string(ClosedFormMembership::NonMember) == "non_member");
    }

    TEST_CASE("classification examples")
    {
        const auto sweep = default_sweep(14);
        const FunctionExpr f = pw(0.0, 1.0);
        const MembershipVerdict two = classify_membership(f, 2.0, full, sweep);
        CHECK(two.verdict == GrowthVerdict::DivergentPower);
        CHECK(two.fitted_exponent == doctest::Approx(1.0).epsilon(0.05));
        CHECK(classify_membership(f, 0.5, full, sweep).verdict == GrowthVerdict::Bounded);
        CHECK(classify_membership(f, 1.0, full, sweep).verdict == GrowthVerdict::DivergentLog);
        CHECK(classify_membership(f, 2.0, ArcSpec(M_PI / 2, M_PI), sweep).verdict == GrowthVerdict::Bounded);
        const auto j = two.to_json();
        for (const char* key : {"verdict", "exponent", "r2", "sup", "p", "arc"})
            CHECK(j.contains(key));
        CHECK(j["verdict"] == "divergent_power");
    }

    TEST_CASE("fitted exponent tracks p gamma - 1")
    {
        const auto sweep = default_sweep(14);
        for (auto [gamma, p] : {std::pair{1.0, 1.5}, {2.0, 0.8}, {0.5, 3.0}}) {
            const MembershipVerdict v = classify_membership(pw(0.0, gamma), p, full, sweep);
            CHECK(v.fitted_exponent == doctest::Approx(p * gamma - 1.0).epsilon(0.05));
        }
    }

    TEST_CASE("nesting: bounded at b implies bounded below b")
    {
        const auto sweep = default_sweep(12);
        const FunctionExpr f = pw(0.5, 1.5) + FunctionExpr::polynomial({1.0, 0.0, 2.0});
        const ArcSpec arc(0.0, 1.0);
        bool bounded_above = false;
        for (double p : {1.2, 0.9, 0.6, 0.3}) {
            const bool b = classify_membership(f, p, arc, sweep).verdict == GrowthVerdict::Bounded;
            if (bounded_above)
                CHECK(b);
            bounded_above = bounded_above || b;
        }
        CHECK(bounded_above);
    }

    TEST_CASE("intersection membership examples")
    {
        const auto sweep = default_sweep(14);
        const IntersectionMembership a = intersection_membership(pw(0.0, 2.0), 0.5, full, 3, sweep);
        CHECK(a.member);
        REQUIRE(a.p_values.size() == 3);
        CHECK(a.p_values[0] == 0.25);
        CHECK(a.p_values[2] == 0.4375);
        const IntersectionMembership b = intersection_membership(pw(0.0, 1.0), 1.0, full, 3, sweep);
        CHECK(b.member);
        CHECK(classify_membership(pw(0.0, 1.0), 1.0, full, sweep).verdict == GrowthVerdict::DivergentLog);
        CHECK(intersection_membership(FunctionExpr::constant(2.0), 7.0, full, 4, sweep).member);
        CHECK_THROWS_AS(intersection_membership(pw(0.0, 1.0), 1.0, full, 2, sweep), std::invalid_argument);
    }
}
