#include "hardylab/analysis.hpp"
#include "hardylab/witnesses.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace hardylab;

namespace {

FunctionExpr pw(double omega, double gamma, cplx scale = 1.0)
{
    return FunctionExpr::power(PowerSingularity::make(omega, gamma, scale));
}

} // namespace

TEST_SUITE("analysis")
{
    TEST_CASE("hardy inequality examples")
    {
        const HardyInequality one = hardy_inequality_check(TaylorSeries({1.0}), 1.0);
        CHECK(one.lhs == 1.0);
        CHECK(one.rhs == 1.0);
        CHECK(one.holds);
        for (int k : {1, 3, 10}) {
            std::vector<cplx> c(k + 1, 0.0);
            c[k] = 1.0;
            const HardyInequality hk = hardy_inequality_check(TaylorSeries(c), 1.0);
            CHECK(hk.lhs == doctest::Approx(1.0 / (k + 1) + (k >= 2 ? std::log(k) : 0.0)));
            CHECK(hk.holds);
        }
        CHECK_FALSE(hardy_inequality_check(TaylorSeries({10.0}), 1.0).holds);
        CHECK_THROWS_AS(hardy_inequality_check(TaylorSeries({1.0}), -1.0), std::invalid_argument);
    }

    TEST_CASE("hardy inequality against the exact H1 norm of (1 - z)^-0.9")
    {
        // H^1 norm = 2F1(0.45, 0.45; 1; 1) = Gamma(0.1) / Gamma(0.55)^2
        const double norm = std::tgamma(0.1) / std::pow(std::tgamma(0.55), 2);
        const HardyInequality h = hardy_inequality_check(taylor_series(pw(0.0, 0.9), 4000), norm);
        CHECK(h.holds);
        CHECK(h.tail_slack > 0.0);
        CHECK(h.lhs < M_PI * norm);
    }

    TEST_CASE("total unboundedness scan examples")
    {
        const auto sweep = default_sweep(12);
        const ScanResult one = total_unboundedness_scan(pw(0.0, 1.0), 8, sweep);
        REQUIRE(one.arcs.size() == 8);
        const auto flags = one.escaping();
        CHECK(flags.front());
        CHECK(flags.back());
        for (std::size_t i = 1; i + 1 < flags.size(); ++i)
            CHECK_FALSE(flags[i]);
        CHECK_FALSE(one.totally_unbounded);

        const ScanResult poly = total_unboundedness_scan(FunctionExpr::polynomial({1.0, 2.0, 3.0}), 8, sweep);
        for (bool b : poly.escaping())
            CHECK_FALSE(b);

        // one pole in the interior of every arc
        FunctionExpr many;
        for (int j = 1; j <= 8; ++j)
            many = many + cplx{std::ldexp(1.0, -j)} * pw(two_pi * (j - 0.5) / 8.0, 1.0);
        const ScanResult all = total_unboundedness_scan(many, 8, sweep);
        CHECK(all.totally_unbounded);
        CHECK_THROWS_AS(total_unboundedness_scan(many, 3, sweep), std::invalid_argument);
    }

    TEST_CASE("blowup report for a witness")
    {
        const auto sweep = default_sweep(14);
        const ArcSpec on(-1.0, 1.0), off(2.0, 3.0);
        const Witness w = build_witness(0.5, 2.0, on);
        const BlowupReport b = blowup_report(w.g, 0.5, {2.0, infinite_exponent}, {on, off}, sweep);
        CHECK(b.q == 1.0);
        CHECK(b.f_verdict.verdict == GrowthVerdict::Bounded);
        CHECK(b.q_verdict.verdict == GrowthVerdict::Bounded);
        REQUIRE(b.rows.size() == 4);
        CHECK(b.rows[0].verdict == GrowthVerdict::DivergentPower);
        CHECK(b.rows[0].exponent == doctest::Approx(0.5).epsilon(0.1));
        CHECK(b.rows[1].verdict == GrowthVerdict::Bounded);
        CHECK(b.rows[2].escaping);
        CHECK_FALSE(b.rows[3].escaping);
        const auto j = b.to_json();
        CHECK(j["rows"][2]["a"] == "inf");
        CHECK(b.to_csv().rfind("kind,a,arc_a,arc_b,verdict,exponent,sup,escaping\n", 0) == 0);
    }

    TEST_CASE("blowup report for a polynomial is bounded everywhere")
    {
        const BlowupReport b = blowup_report(FunctionExpr::polynomial({1.0, -2.0, 0.5}), 0.5, {2.0, infinite_exponent},
                                             {ArcSpec(-1.0, 1.0)}, default_sweep(10));
        CHECK(b.q_verdict.verdict == GrowthVerdict::Bounded);
        for (const auto& row : b.rows)
            CHECK(row.verdict == GrowthVerdict::Bounded);
        CHECK_FALSE(b.scan.totally_unbounded);
    }

    TEST_CASE("perturbation with g = 0 is exact homogeneity")
    {
        const ArcSpec arc(-1.0, 1.0);
        const FunctionExpr f = pw(0.0, 2.5);
        const PerturbationReport rep =
            perturbation_experiment(FunctionExpr::zero(), f, 0.5, 0.8, arc, 4, default_sweep(10));
        CHECK(rep.psi_exponent == 0.8);
        for (const auto& s : rep.steps) {
            CHECK(s.max_homogeneity_error <= 1e-10);
            CHECK(std::abs(s.min_psi_residual) <= 1e-10 * (1.0 + rep.t_f.back()));
            CHECK(s.escaping);
        }
    }

    TEST_CASE("perturbation of a polynomial by a witness")
    {
        const ArcSpec arc(-1.0, 1.0);
        const Witness w = build_witness(0.5, 2.0, arc);
        const PerturbationReport rep = perturbation_experiment(FunctionExpr::polynomial({1.0, 1.0}), w.g, 0.5, 2.0,
                                                               arc, 3, default_sweep(14));
        CHECK(rep.psi_exponent == 1.0);
        CHECK(rep.g_verdict == GrowthVerdict::Bounded);
        REQUIRE(rep.steps.size() == 3);
        for (const auto& s : rep.steps) {
            CHECK(s.escaping);
            CHECK(s.min_subadditivity_residual >= -1e-8);
            CHECK(s.min_psi_residual >= -1e-8);
            CHECK(s.lambda == std::ldexp(1.0, -s.n));
        }
        CHECK(rep.to_csv().rfind("n,lambda,k,r,", 0) == 0);
        CHECK(rep.to_json()["steps"].size() == 3);
        CHECK_THROWS_AS(perturbation_experiment(FunctionExpr::zero(), w.g, 0.5, 2.0, arc, 0, default_sweep(5)),
                        std::invalid_argument);
    }
}
