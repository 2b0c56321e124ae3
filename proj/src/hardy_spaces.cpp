#include "hardylab/hardy_spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab {

void MetricParams::validate() const
{
    if (!(p > 0.0))
        throw std::invalid_argument("metric: p must be > 0");
    if (compact_sup_terms < 1)
        throw std::invalid_argument("metric: compact_sup_terms must be >= 1");
}

void IntersectionParams::validate() const
{
    if (!(target > 0.0))
        throw std::invalid_argument("intersection: target exponent must be > 0");
    if (p_seq.empty())
        throw std::invalid_argument("intersection: p sequence is empty");
    for (std::size_t i = 0; i < p_seq.size(); ++i) {
        if (!(p_seq[i] > 0.0) || !(p_seq[i] < target))
            throw std::invalid_argument("intersection: every p_n must lie in (0, target)");
        if (i > 0 && !(p_seq[i] > p_seq[i - 1]))
            throw std::invalid_argument("intersection: p sequence must be strictly increasing");
    }
}

MetricEstimate metric_dp(const FunctionExpr& f, const FunctionExpr& g, const MetricParams& params)
{
    params.validate();
    MetricEstimate out;

    if (std::isinf(params.p)) {
        const SupEstimate s = sup_on_arc_diff(f, g, params.arc, params.sweep, params.law);
        out.boundary_part = s.value;
        out.escaping = s.escaping;
    } else {
        const SweepTable t = radial_sweep_diff(f, g, params.p, params.arc, params.sweep, params.law);
        const double sup = t.sup();
        out.boundary_part = params.p < 1.0 ? sup : std::pow(sup, 1.0 / params.p);
        out.escaping = is_divergent(t.growth().verdict);
    }

    if (!params.arc.is_full_circle()) {
        const auto full = ArcSpec::full_circle();
        double compact = 0.0;
        for (int n = 2; n <= params.compact_sup_terms + 1; ++n) {
            const double r = 1.0 - 1.0 / n;
            const double s = arc_max_modulus_diff(f, g, r, full, params.law.points(r, full));
            compact += std::ldexp(s / (1.0 + s), -n);
        }
        out.compact_part = compact;
    }

    out.value = out.escaping ? std::numeric_limits<double>::infinity()
                             : out.boundary_part + out.compact_part;
    return out;
}

MetricEstimate metric_intersection(const FunctionExpr& f, const FunctionExpr& g,
                                   const IntersectionParams& iparams, const MetricParams& base)
{
    iparams.validate();
    MetricEstimate out;
    for (std::size_t i = 0; i < iparams.p_seq.size(); ++i) {
        MetricParams mp = base;
        mp.p = iparams.p_seq[i];
        const MetricEstimate d = metric_dp(f, g, mp);
        const int n = static_cast<int>(i) + 1;
        if (d.escaping) {
            out.escaping = true;
            out.value += std::ldexp(1.0, -n);
        } else {
            out.value += std::ldexp(d.value / (1.0 + d.value), -n);
        }
    }
    out.boundary_part = out.value;
    return out;
}

std::string_view to_string(ClosedFormMembership m)
{
    switch (m) {
    case ClosedFormMembership::Member: return "member";
    case ClosedFormMembership::NonMember: return "non_member";
    case ClosedFormMembership::Boundary: return "boundary";
    }
    return "boundary";
}

ClosedFormMembership closed_form_membership(const PowerSingularity& ps, double p)
{
    if (!(p > 0.0) || !(ps.gamma > 0.0))
        throw std::invalid_argument("closed_form_membership: need p > 0 and gamma > 0");
    constexpr double band = 1e-9;
    const double s = p * ps.gamma;
    if (s == 1.0 || s > 1.0 + band)
        return ClosedFormMembership::NonMember;
    if (s < 1.0 - band)
        return ClosedFormMembership::Member;
    return ClosedFormMembership::Boundary;
}

nlohmann::json MembershipVerdict::to_json(bool with_table) const
{
    nlohmann::json j{{"verdict", to_string(verdict)},
                     {"exponent", fitted_exponent},
                     {"r2", fit_quality},
                     {"sup", sup_estimate},
                     {"limit", limit_estimate},
                     {"p", p},
                     {"arc", arc_to_json(arc)}};
    if (with_table)
        j["table"] = table.to_json();
    return j;
}

MembershipVerdict classify_membership(const FunctionExpr& expr, double p, const ArcSpec& arc,
                                      const RadialSweep& sweep, const ResolutionLaw& law)
{
    MembershipVerdict out;
    out.p = p;
    out.arc = arc;
    out.table = radial_sweep(expr, p, arc, sweep, law);
    const GrowthFit fit = out.table.growth();
    out.verdict = fit.verdict;
    out.fitted_exponent = fit.exponent;
    out.fit_quality = fit.r2;
    out.sup_estimate = out.table.sup();
    out.limit_estimate = fit.verdict == GrowthVerdict::Bounded ? fit.limit : out.sup_estimate;
    return out;
}

IntersectionMembership intersection_membership(const FunctionExpr& expr, double target,
                                               const ArcSpec& arc, int grid_size,
                                               const RadialSweep& sweep, const ResolutionLaw& law)
{
    if (grid_size < 3)
        throw std::invalid_argument("intersection_membership: grid size must be >= 3");
    if (!(target > 0.0) || !std::isfinite(target))
        throw std::invalid_argument("intersection_membership: target must be finite and > 0");
    IntersectionMembership out;
    out.target = target;
    for (int l = 1; l <= grid_size; ++l)
        out.p_values.push_back(target * (1.0 - std::ldexp(1.0, -l)));
    out.verdicts.resize(out.p_values.size());
    for (std::size_t i = 0; i < out.p_values.size(); ++i)
        out.verdicts[i] = classify_membership(expr, out.p_values[i], arc, sweep, law);
    out.member = true;
    for (const auto& v : out.verdicts)
        out.member = out.member && v.verdict == GrowthVerdict::Bounded;
    return out;
}

} // namespace hardylab
