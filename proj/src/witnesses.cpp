#include "hardylab/witnesses.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab {

namespace {

nlohmann::json exponent_json(double a)
{
    if (std::isinf(a))
        return "inf";
    return a;
}

// Dyadic values k/2^s, |k| <= s 2^s, in rank order (see enumerate_rational_polynomials).
std::vector<double> stage_values(int s)
{
    std::vector<double> out{0.0};
    for (int e = 0; e <= s; ++e) {
        const double den = std::ldexp(1.0, e);
        const std::int64_t bound = static_cast<std::int64_t>(s) << e;
        const std::int64_t step = e == 0 ? 1 : 2;
        for (std::int64_t m = 1; m <= bound; m += step) {
            out.push_back(m / den);
            out.push_back(-m / den);
        }
    }
    return out;
}

bool in_stage(double v, int s)
{
    if (s < 1)
        return false;
    const double scaled = std::ldexp(v, s);
    return std::abs(v) <= s && scaled == std::floor(scaled);
}

bool poly_in_stage(const std::vector<cplx>& poly, int s)
{
    if (s < 1 || static_cast<int>(poly.size()) - 1 > s)
        return false;
    for (cplx c : poly)
        if (!in_stage(c.real(), s) || !in_stage(c.imag(), s))
            return false;
    return true;
}

} // namespace

double q_of(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("q_of: need 0 < p < 1 (p >= 1 is the intersection case)");
    return p / (1.0 - p);
}

double select_gamma(double p, double a)
{
    const double q = q_of(p);
    if (!(a > q))
        throw std::invalid_argument("select_gamma: need a > q = p/(1-p); the interval [1 + 1/a, 1/p) is empty for a = " +
                                    format_double(a) + ", p = " + format_double(p));
    const double inv_a = std::isinf(a) ? 0.0 : 1.0 / a;
    return 0.5 * (1.0 + inv_a + 1.0 / p);
}

nlohmann::json WitnessSpec::to_json() const
{
    nlohmann::json j{{"p", p},
                     {"a", exponent_json(a)},
                     {"arc", arc_to_json(arc)},
                     {"omega", omega},
                     {"gamma", gamma},
                     {"p_gamma", p * gamma}};
    if (p < 1.0)
        j["q"] = q_of(p);
    if (!std::isinf(a))
        j["a_gamma_minus_1"] = a * (gamma - 1.0);
    return j;
}

Witness build_witness(double p, double a, const ArcSpec& arc)
{
    WitnessSpec spec;
    spec.p = p;
    spec.a = a;
    spec.arc = arc;
    spec.omega = normalize_angle(arc.midpoint());
    if (std::isinf(a)) {
        q_of(p); // validates 0 < p < 1
        spec.gamma = 1.0;
    } else {
        spec.gamma = select_gamma(p, a);
    }
    return {spec, FunctionExpr::power(PowerSingularity::make(spec.omega, spec.gamma))};
}

Witness build_intersection_witness(double p, const ArcSpec& arc)
{
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("build_intersection_witness: need 0 < p <= 1");
    WitnessSpec spec;
    spec.p = p;
    spec.a = p < 1.0 ? q_of(p) : infinite_exponent;
    spec.arc = arc;
    spec.omega = normalize_angle(arc.midpoint());
    spec.gamma = 1.0 / p;
    return {spec, FunctionExpr::power(PowerSingularity::make(spec.omega, spec.gamma))};
}

std::vector<cplx> enumerate_rational_polynomials(std::int64_t j)
{
    if (j < 1)
        throw std::invalid_argument("enumerate_rational_polynomials: j must be >= 1");
    std::int64_t remaining = j;
    for (int s = 1;; ++s) {
        const std::vector<double> reals = stage_values(s);
        const auto nr = static_cast<std::int64_t>(reals.size());
        const std::int64_t nv = nr * nr;
        auto value = [&](std::int64_t idx) { return cplx{reals[idx % nr], reals[idx / nr]}; };

        for (int d = 0; d <= s; ++d) {
            // Tuples (c_0, ..., c_d) with c_0 most significant and c_d != 0 for d >= 1.
            std::vector<std::int64_t> digits(d + 1, 0);
            if (d >= 1)
                digits[d] = 1;
            while (true) {
                std::vector<cplx> poly(d + 1);
                for (int i = 0; i <= d; ++i)
                    poly[i] = value(digits[i]);
                if (!poly_in_stage(poly, s - 1) && --remaining == 0)
                    return d == 0 && poly[0] == cplx{0.0} ? std::vector<cplx>{} : poly;

                int pos = d;
                while (pos >= 0) {
                    const std::int64_t lo = (pos == d && d >= 1) ? 1 : 0;
                    if (++digits[pos] < nv)
                        break;
                    digits[pos] = lo;
                    --pos;
                }
                if (pos < 0)
                    break;
            }
        }
    }
}

FunctionExpr DenseFamilyEntry::phi() const
{
    return FunctionExpr::power(PowerSingularity::make(omega, gamma));
}

FunctionExpr DenseFamilyEntry::element() const
{
    return cplx{c} * phi() + FunctionExpr::polynomial(poly);
}

nlohmann::json DenseFamily::to_json() const
{
    nlohmann::json j{{"p", p}, {"a", exponent_json(a)}, {"arc", arc_to_json(arc)}};
    auto& out = j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        auto coeffs = nlohmann::json::array();
        for (cplx c : e.poly)
            coeffs.push_back({c.real(), c.imag()});
        out.push_back({{"j", e.j},
                       {"omega", e.omega},
                       {"gamma", e.gamma},
                       {"c", e.c},
                       {"phi_metric", e.phi_metric},
                       {"scaled_metric", e.scaled_metric},
                       {"poly_coeffs", coeffs}});
    }
    return j;
}

DenseFamily build_dense_family(double p, double a, const ArcSpec& arc, int m,
                               const RadialSweep& sweep, const ResolutionLaw& law)
{
    if (m < 1)
        throw std::invalid_argument("build_dense_family: m must be >= 1");
    DenseFamily fam;
    fam.p = p;
    fam.a = a;
    fam.arc = arc;
    const double gamma = select_gamma(p, a);
    const auto full = ArcSpec::full_circle();

    for (int j = 1; j <= m; ++j) {
        DenseFamilyEntry e;
        e.j = j;
        e.poly = enumerate_rational_polynomials(j);
        e.omega = arc.midpoint() - arc.length() * std::ldexp(1.0, -(j + 1));
        e.gamma = gamma;

        const MembershipVerdict phi_v = classify_membership(e.phi(), p, full, sweep, law);
        const double phi_sup = phi_v.sup_estimate;
        e.phi_metric = std::max(phi_sup, phi_v.limit_estimate);
        e.c = std::pow(1.0 / (2.0 * j * e.phi_metric), 1.0 / p);

        MetricParams mp;
        mp.p = p;
        mp.arc = full;
        mp.sweep = sweep;
        mp.law = law;
        const MetricEstimate scaled = metric_dp(cplx{e.c} * e.phi(), FunctionExpr::zero(), mp);
        const double predicted = std::pow(e.c, p) * phi_sup;
        if (scaled.escaping || std::abs(scaled.value - predicted) > 1e-6 * predicted)
            throw std::runtime_error("build_dense_family: homogeneity check failed at j = " +
                                     std::to_string(j) + " (measured " + format_double(scaled.value) +
                                     ", predicted " + format_double(predicted) + ")");
        e.scaled_metric = scaled.value;
        fam.entries.push_back(std::move(e));
    }
    return fam;
}

Combination combine(const DenseFamily& family, const std::vector<cplx>& beta)
{
    if (beta.size() > family.entries.size())
        throw std::invalid_argument("combine: more coefficients than family entries");
    int m = 0;
    for (std::size_t i = 0; i < beta.size(); ++i)
        if (beta[i] != cplx{0.0})
            m = static_cast<int>(i) + 1;
    if (m == 0)
        throw std::invalid_argument("combine: all coefficients are zero");

    FunctionExpr f;
    for (int i = 0; i < m; ++i)
        if (beta[i] != cplx{0.0})
            f = f + beta[i] * family.entries[i].element();

    const ArcSpec& arc = family.arc;
    auto omega_at = [&](int j) { return arc.midpoint() - arc.length() * std::ldexp(1.0, -(j + 1)); };
    const double wm = omega_at(m);
    const double left = m == 1 ? wm - arc.a() : wm - omega_at(m - 1);
    const double right = std::min(omega_at(m + 1) - wm, arc.midpoint() - wm);
    const double radius = 0.5 * std::min(left, right);
    return {std::move(f), m, ArcSpec(wm - radius, wm + radius)};
}

} // namespace hardylab
