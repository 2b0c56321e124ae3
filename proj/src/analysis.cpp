#include "hardylab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hardylab {

namespace {

nlohmann::json exponent_json(double a)
{
    if (std::isinf(a))
        return "inf";
    return a;
}

std::string exponent_text(double a)
{
    return std::isinf(a) ? "inf" : format_double(a);
}

// T(h, r_k) from the arc means of |F(h)|^a: no outer power for a < 1, 1/a-th power otherwise.
std::vector<double> t_values(const SweepTable& t, double a)
{
    std::vector<double> out;
    for (const auto& row : t.rows)
        out.push_back(a >= 1.0 ? std::pow(row.value, 1.0 / a) : row.value);
    return out;
}

} // namespace

std::vector<bool> ScanResult::escaping() const
{
    std::vector<bool> out;
    for (const auto& s : sups)
        out.push_back(s.escaping);
    return out;
}

nlohmann::json ScanResult::to_json() const
{
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < arcs.size(); ++i)
        rows.push_back({{"arc", arc_to_json(arcs[i])},
                        {"sup", sups[i].value},
                        {"escaping", sups[i].escaping},
                        {"verdict", to_string(sups[i].growth.verdict)}});
    return {{"arcs", rows}, {"totally_unbounded", totally_unbounded}};
}

ScanResult total_unboundedness_scan(const FunctionExpr& f, int n_arcs, const RadialSweep& sweep,
                                    const ResolutionLaw& law)
{
    if (n_arcs < 4)
        throw std::invalid_argument("total_unboundedness_scan: need at least 4 arcs");
    ScanResult out;
    const double width = two_pi / n_arcs;
    for (int i = 0; i < n_arcs; ++i) {
        const double a = i * width;
        const double b = i + 1 == n_arcs ? two_pi : (i + 1) * width;
        out.arcs.emplace_back(a, b);
        out.sups.push_back(sup_on_arc(f, out.arcs.back(), sweep, law));
    }
    out.totally_unbounded = std::all_of(out.sups.begin(), out.sups.end(),
                                        [](const SupEstimate& s) { return s.escaping; });
    return out;
}

nlohmann::json BlowupReport::to_json() const
{
    auto jr = nlohmann::json::array();
    for (const auto& r : rows)
        jr.push_back({{"a", exponent_json(r.a)},
                      {"arc", arc_to_json(r.arc)},
                      {"verdict", to_string(r.verdict)},
                      {"exponent", r.exponent},
                      {"sup", r.sup},
                      {"escaping", r.escaping}});
    return {{"function", function},
            {"primitive", primitive},
            {"p", p},
            {"q", q},
            {"f_in_Hp", f_verdict.to_json()},
            {"F_in_Hq", q_verdict.to_json()},
            {"rows", jr},
            {"scan", scan.to_json()}};
}

std::string BlowupReport::to_csv() const
{
    std::ostringstream os;
    os << "kind,a,arc_a,arc_b,verdict,exponent,sup,escaping\n";
    auto line = [&](const char* kind, const std::string& a, const ArcSpec& arc, GrowthVerdict v,
                    double e, double s, bool esc) {
        os << kind << ',' << a << ',' << format_double(arc.a()) << ',' << format_double(arc.b())
           << ',' << to_string(v) << ',' << format_double(e) << ',' << format_double(s) << ','
           << (esc ? 1 : 0) << '\n';
    };
    line("f_in_Hp", format_double(p), f_verdict.arc, f_verdict.verdict, f_verdict.fitted_exponent,
         f_verdict.sup_estimate, is_divergent(f_verdict.verdict));
    line("F_in_Hq", format_double(q), q_verdict.arc, q_verdict.verdict, q_verdict.fitted_exponent,
         q_verdict.sup_estimate, is_divergent(q_verdict.verdict));
    for (const auto& r : rows)
        line("F_in_Ha", exponent_text(r.a), r.arc, r.verdict, r.exponent, r.sup, r.escaping);
    for (std::size_t i = 0; i < scan.arcs.size(); ++i)
        line("scan", "inf", scan.arcs[i], scan.sups[i].growth.verdict,
             scan.sups[i].growth.exponent, scan.sups[i].value, scan.sups[i].escaping);
    return os.str();
}

BlowupReport blowup_report(const FunctionExpr& f, double p, const std::vector<double>& a_list,
                           const std::vector<ArcSpec>& arcs, const RadialSweep& sweep,
                           const ResolutionLaw& law, int n_arcs)
{
    BlowupReport out;
    const FunctionExpr prim = primitive_expr(f);
    out.function = f.to_string();
    out.primitive = prim.to_string();
    out.p = p;
    out.q = p < 1.0 ? p / (1.0 - p) : infinite_exponent;
    const auto full = ArcSpec::full_circle();
    out.f_verdict = classify_membership(f, p, full, sweep, law);
    if (std::isinf(out.q)) {
        const SupEstimate s = sup_on_arc(prim, full, sweep, law);
        out.q_verdict.p = out.q;
        out.q_verdict.verdict = s.escaping ? s.growth.verdict : GrowthVerdict::Bounded;
        out.q_verdict.fitted_exponent = s.growth.exponent;
        out.q_verdict.sup_estimate = s.value;
        out.q_verdict.limit_estimate = s.growth.limit;
    } else {
        out.q_verdict = classify_membership(prim, out.q, full, sweep, law);
    }

    for (double a : a_list) {
        for (const auto& arc : arcs) {
            BlowupRow row;
            row.a = a;
            row.arc = arc;
            if (std::isinf(a)) {
                const SupEstimate s = sup_on_arc(prim, arc, sweep, law);
                row.escaping = s.escaping;
                row.verdict = s.escaping && !is_divergent(s.growth.verdict) ? GrowthVerdict::DivergentPower
                            : s.escaping                                    ? s.growth.verdict
                                                                            : GrowthVerdict::Bounded;
                row.exponent = s.growth.exponent;
                row.sup = s.value;
            } else {
                const MembershipVerdict v = classify_membership(prim, a, arc, sweep, law);
                row.verdict = v.verdict;
                row.exponent = v.fitted_exponent;
                row.sup = v.sup_estimate;
                row.escaping = is_divergent(v.verdict);
            }
            out.rows.push_back(row);
        }
    }
    out.scan = total_unboundedness_scan(prim, n_arcs, sweep, law);
    return out;
}

nlohmann::json HardyInequality::to_json() const
{
    return {{"lhs", lhs}, {"tail_slack", tail_slack}, {"rhs", rhs}, {"pi_rhs", M_PI * rhs},
            {"holds", holds}};
}

HardyInequality hardy_inequality_check(const TaylorSeries& ts, double h1_norm_estimate)
{
    if (!(h1_norm_estimate >= 0.0))
        throw std::invalid_argument("hardy_inequality_check: norm estimate must be >= 0");
    HardyInequality out;
    const auto c = ts.coefficients();
    double sum = 0.0, comp = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        const double t = std::abs(c[n]) / static_cast<double>(n + 1);
        const double s = sum + t;
        comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
        sum = s;
    }
    const std::size_t big_n = c.size() - 1;
    out.tail_slack = big_n >= 2 ? std::abs(c[big_n]) * std::log(static_cast<double>(big_n)) : 0.0;
    out.lhs = sum + comp + out.tail_slack;
    out.rhs = h1_norm_estimate;
    out.holds = out.lhs <= M_PI * out.rhs + 1e-8;
    return out;
}

nlohmann::json PerturbationReport::to_json() const
{
    auto js = nlohmann::json::array();
    for (const auto& s : steps)
        js.push_back({{"n", s.n},
                      {"lambda", s.lambda},
                      {"T_perturbed", s.t_perturbed},
                      {"T_scaled", s.t_scaled},
                      {"min_subadditivity_residual", s.min_subadditivity_residual},
                      {"min_psi_residual", s.min_psi_residual},
                      {"max_homogeneity_error", s.max_homogeneity_error},
                      {"verdict", to_string(s.verdict)},
                      {"escaping", s.escaping}});
    return {{"g", g},
            {"f", f},
            {"p", p},
            {"a", a},
            {"psi_exponent", psi_exponent},
            {"arc", arc_to_json(arc)},
            {"radii", radii},
            {"T_f", t_f},
            {"T_g", t_g},
            {"g_verdict", to_string(g_verdict)},
            {"steps", js}};
}

std::string PerturbationReport::to_csv() const
{
    std::ostringstream os;
    os << "n,lambda,k,r,T_f,T_g,T_perturbed,T_scaled,verdict,escaping\n";
    for (const auto& s : steps)
        for (std::size_t k = 0; k < radii.size(); ++k)
            os << s.n << ',' << format_double(s.lambda) << ',' << k + 1 << ','
               << format_double(radii[k]) << ',' << format_double(t_f[k]) << ','
               << format_double(t_g[k]) << ',' << format_double(s.t_perturbed[k]) << ','
               << format_double(s.t_scaled[k]) << ',' << to_string(s.verdict) << ','
               << (s.escaping ? 1 : 0) << '\n';
    return os.str();
}

PerturbationReport perturbation_experiment(const FunctionExpr& g, const FunctionExpr& f, double p,
                                           double a, const ArcSpec& arc, int n_halvings,
                                           const RadialSweep& sweep, const ResolutionLaw& law)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("perturbation_experiment: need 0 < a < inf");
    if (n_halvings < 1)
        throw std::invalid_argument("perturbation_experiment: need at least one halving");

    PerturbationReport out;
    out.g = g.to_string();
    out.f = f.to_string();
    out.p = p;
    out.a = a;
    out.arc = arc;
    out.psi_exponent = a >= 1.0 ? 1.0 : a;
    out.radii.assign(sweep.radii().begin(), sweep.radii().end());

    std::vector<double> lambdas;
    for (int n = 1; n <= n_halvings; ++n)
        lambdas.push_back(std::ldexp(1.0, -n));
    const PencilSweep ps =
        radial_sweep_pencil(primitive_expr(g), primitive_expr(f), lambdas, a, arc, sweep, law);
    const std::vector<double> tf = t_values(ps.f, a);
    const std::vector<double> tg = t_values(ps.g, a);
    out.t_f = tf;
    out.t_g = tg;
    out.g_verdict = ps.g.growth().verdict;

    for (int n = 1; n <= n_halvings; ++n) {
        PerturbationStep step;
        step.n = n;
        step.lambda = lambdas[n - 1];
        const double psi = std::pow(step.lambda, out.psi_exponent);
        const std::vector<double> th = t_values(ps.combined[n - 1], a);
        const std::vector<double> ts = t_values(ps.scaled[n - 1], a);
        step.t_perturbed = th;
        step.t_scaled = ts;
        step.verdict = ps.combined[n - 1].growth().verdict;
        step.escaping = is_divergent(step.verdict);

        step.min_subadditivity_residual = std::numeric_limits<double>::infinity();
        step.min_psi_residual = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < out.radii.size(); ++k) {
            const double sub = tg[k] + ts[k] - th[k];
            const double lower = th[k] + tg[k] - psi * tf[k];
            const double scale = std::max({1.0, tg[k] + ts[k], psi * tf[k]});
            step.min_subadditivity_residual = std::min(step.min_subadditivity_residual, sub);
            step.min_psi_residual = std::min(step.min_psi_residual, lower);
            const double ref = psi * tf[k];
            if (ref > 0.0)
                step.max_homogeneity_error =
                    std::max(step.max_homogeneity_error, std::abs(ts[k] - ref) / ref);
            if (sub < -perturbation_tolerance * scale || lower < -perturbation_tolerance * scale)
                throw std::runtime_error("perturbation_experiment: inequality violated at n = " +
                                         std::to_string(n) + ", r = " +
                                         format_double(out.radii[k]) + " (subadditivity residual " +
                                         format_double(sub) + ", psi residual " +
                                         format_double(lower) + ")");
        }
        out.steps.push_back(std::move(step));
    }
    return out;
}

} // namespace hardylab
