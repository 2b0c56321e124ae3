#include "hardylab/quadrature.hpp"

#include "hardylab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hardylab {

namespace {

// Neumaier compensated sum; rows reach 10^8 terms near the circle.
class CompensatedSum {
public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void check_args(double p, double r, int n_points)
{
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("arc mean: p must be a finite positive number");
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("arc mean: radius must satisfy 0 < r < 1");
    if (n_points < 16)
        throw std::invalid_argument("arc mean: need at least 16 points");
}

double abs_pow(double modulus, double p)
{
    if (p == 2.0)
        return modulus * modulus;
    if (p == 1.0)
        return modulus;
    return std::pow(modulus, p);
}

double abs_pow(cplx v, double p)
{
    return p == 2.0 ? std::norm(v) : abs_pow(std::abs(v), p);
}

[[noreturn]] void non_finite(double r, double theta)
{
    std::ostringstream os;
    os << "non-finite integrand at r = " << format_double(r) << ", theta = " << format_double(theta);
    throw std::runtime_error(os.str());
}

template <class Sample>
double midpoint_mean(double r, const ArcSpec& arc, int n_points, Sample&& sample)
{
    const double h = arc.length() / n_points;
    CompensatedSum acc;
    for (int k = 0; k < n_points; ++k) {
        const double theta = arc.a() + (k + 0.5) * h;
        const double v = sample(theta);
        if (!std::isfinite(v))
            non_finite(r, theta);
        acc.add(v);
    }
    return acc.value() / n_points;
}

// |coef (1 - r e^{i(theta - omega)})^{-gamma}|^p from |w|^2 = (1 - r)^2 + 4 r sin^2(phi/2).
double single_power_mean(const PowerTerm& t, double p, double r, const ArcSpec& arc, int n_points)
{
    const double delta = 1.0 - r;
    const double lead = abs_pow(std::abs(t.coef), p);
    const double expo = -0.5 * t.gamma * p;
    return lead * midpoint_mean(r, arc, n_points, [&](double theta) {
               const double s = std::sin(0.5 * (theta - t.omega));
               return std::pow(delta * delta + 4.0 * r * s * s, expo);
           });
}

template <class RowFn>
SweepTable sweep_rows(std::string function, double p, const ArcSpec& arc, const RadialSweep& sweep,
                      const ResolutionLaw& law, RowFn&& row_value)
{
    SweepTable table;
    table.function = std::move(function);
    table.p = p;
    table.arc = arc;
    const auto radii = sweep.radii();
    table.rows.resize(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        const double r = radii[i];
        const int n = law.points(r, arc);
        table.rows[i] = SweepRow{static_cast<int>(i) + 1, r, -std::log1p(-r), row_value(r, n), n};
    });
    return table;
}

SupEstimate finish_sup(std::vector<double> per_radius, const RadialSweep& sweep)
{
    SupEstimate out;
    out.per_radius = std::move(per_radius);
    if (out.per_radius.empty())
        return out;
    out.value = *std::max_element(out.per_radius.begin(), out.per_radius.end());
    std::vector<double> xs;
    for (double r : sweep.radii())
        xs.push_back(-std::log1p(-r));
    out.growth = classify_growth(xs, out.per_radius);
    const std::size_t n = out.per_radius.size();
    const bool factor = n >= 3 && out.per_radius[n - 3] > 0 &&
                        out.per_radius[n - 1] >= 1.5 * out.per_radius[n - 3];
    out.escaping = factor || is_divergent(out.growth.verdict);
    return out;
}

} // namespace

int ResolutionLaw::points(double r, const ArcSpec& arc) const
{
    const double want = std::ceil(per_width * scale * arc.length() / (1.0 - r));
    if (!(want < 2.0e9))
        throw std::overflow_error("resolution law: too many points for r = " + format_double(r));
    return std::max(min_points, static_cast<int>(want));
}

nlohmann::json ResolutionLaw::to_json() const
{
    return {{"min_points", min_points}, {"per_width", per_width}, {"scale", scale}};
}

RadialSweep::RadialSweep(std::vector<double> radii)
    : radii_(std::move(radii))
{
    if (radii_.empty())
        throw std::invalid_argument("radial sweep needs at least one radius");
    for (std::size_t i = 0; i < radii_.size(); ++i) {
        if (!(radii_[i] > 0.0 && radii_[i] < 1.0))
            throw std::invalid_argument("radial sweep radii must lie in (0, 1)");
        if (i > 0 && !(radii_[i] > radii_[i - 1]))
            throw std::invalid_argument("radial sweep radii must be strictly increasing");
    }
}

RadialSweep default_sweep(int k_max)
{
    if (k_max < 1 || k_max > 40)
        throw std::invalid_argument("default_sweep: k_max must lie in [1, 40]");
    return scaled_sweep(1.0, k_max);
}

RadialSweep scaled_sweep(double width, int k_max)
{
    if (k_max < 1 || k_max > 40)
        throw std::invalid_argument("scaled_sweep: k_max must lie in [1, 40]");
    if (!(width > 0.0 && width <= 1.0))
        throw std::invalid_argument("scaled_sweep: width must lie in (0, 1]");
    std::vector<double> r;
    for (int k = 1; k <= k_max; ++k)
        r.push_back(1.0 - std::ldexp(width, -k));
    return RadialSweep(std::move(r));
}

double SweepTable::sup() const
{
    double s = 0.0;
    for (const auto& row : rows)
        s = std::max(s, row.value);
    return s;
}

std::vector<double> SweepTable::xs() const
{
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows)
        out.push_back(row.x);
    return out;
}

std::vector<double> SweepTable::values() const
{
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows)
        out.push_back(row.value);
    return out;
}

GrowthFit SweepTable::growth(const GrowthThresholds& th) const
{
    return classify_growth(xs(), values(), th);
}

std::string SweepTable::to_csv() const
{
    std::ostringstream os;
    os << "k,r,x,value\n";
    for (const auto& row : rows)
        os << row.k << ',' << format_double(row.r) << ',' << format_double(row.x) << ','
           << format_double(row.value) << '\n';
    return os.str();
}

nlohmann::json arc_to_json(const ArcSpec& arc) { return nlohmann::json::array({arc.a(), arc.b()}); }

nlohmann::json SweepTable::to_json() const
{
    nlohmann::json j;
    j["function"] = function;
    j["p"] = p;
    j["arc"] = arc_to_json(arc);
    auto& out_rows = j["rows"] = nlohmann::json::array();
    for (const auto& row : rows)
        out_rows.push_back({{"k", row.k}, {"r", row.r}, {"x", row.x}, {"value", row.value},
                            {"n_points", row.n_points}});
    j["sup"] = sup();
    j["escaping"] = rows.empty() ? false : is_divergent(growth().verdict);
    return j;
}

nlohmann::json SupEstimate::to_json() const
{
    return {{"sup", value},
            {"escaping", escaping},
            {"per_radius", per_radius},
            {"growth", to_string(growth.verdict)},
            {"exponent", growth.exponent}};
}

double arc_mean_power(const FunctionExpr& expr, double p, double r, const ArcSpec& arc,
                      int n_points)
{
    check_args(p, r, n_points);
    if (expr.is_zero())
        return 0.0;
    if (const PowerTerm* t = expr.single_power_term())
        return single_power_mean(*t, p, r, arc, n_points);
    return midpoint_mean(r, arc, n_points, [&](double theta) {
        return abs_pow(expr.eval_polar(r, theta), p);
    });
}

double arc_mean_power_diff(const FunctionExpr& f, const FunctionExpr& g, double p, double r,
                           const ArcSpec& arc, int n_points)
{
    if (g.is_zero())
        return arc_mean_power(f, p, r, arc, n_points);
    if (f.is_zero())
        return arc_mean_power(g, p, r, arc, n_points);
    check_args(p, r, n_points);
    return midpoint_mean(r, arc, n_points, [&](double theta) {
        return abs_pow(f.eval_polar(r, theta) - g.eval_polar(r, theta), p);
    });
}

double arc_max_modulus_diff(const FunctionExpr& f, const FunctionExpr& g, double r,
                            const ArcSpec& arc, int n_points)
{
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("arc max: radius must satisfy 0 < r < 1");
    if (n_points < 2)
        throw std::invalid_argument("arc max: need at least 2 points");
    const double h = arc.length() / n_points;
    double m = 0.0;
    for (int k = 0; k < n_points; ++k) {
        const double theta = arc.a() + (k + 0.5) * h;
        const cplx v = g.is_zero() ? f.eval_polar(r, theta)
                                   : f.eval_polar(r, theta) - g.eval_polar(r, theta);
        const double a = std::abs(v);
        if (!std::isfinite(a))
            non_finite(r, theta);
        m = std::max(m, a);
    }
    return m;
}

SweepTable radial_sweep(const FunctionExpr& expr, double p, const ArcSpec& arc,
                        const RadialSweep& sweep, const ResolutionLaw& law)
{
    return sweep_rows(expr.to_string(), p, arc, sweep, law,
                      [&](double r, int n) { return arc_mean_power(expr, p, r, arc, n); });
}

SweepTable radial_sweep_diff(const FunctionExpr& f, const FunctionExpr& g, double p,
                             const ArcSpec& arc, const RadialSweep& sweep, const ResolutionLaw& law)
{
    if (g.is_zero())
        return radial_sweep(f, p, arc, sweep, law);
    return sweep_rows("(" + f.to_string() + ") - (" + g.to_string() + ")", p, arc, sweep, law,
                      [&](double r, int n) { return arc_mean_power_diff(f, g, p, r, arc, n); });
}

PencilMeans arc_mean_power_pencil(const FunctionExpr& g, const FunctionExpr& f,
                                  std::span<const double> lambdas, double p, double r,
                                  const ArcSpec& arc, int n_points)
{
    check_args(p, r, n_points);
    const std::size_t m = lambdas.size();
    CompensatedSum acc_g, acc_f;
    std::vector<CompensatedSum> acc_c(m), acc_s(m);
    const double h = arc.length() / n_points;
    for (int k = 0; k < n_points; ++k) {
        const double theta = arc.a() + (k + 0.5) * h;
        const cplx vg = g.eval_polar(r, theta);
        const cplx vf = f.eval_polar(r, theta);
        if (!std::isfinite(std::abs(vg)) || !std::isfinite(std::abs(vf)))
            non_finite(r, theta);
        acc_g.add(abs_pow(vg, p));
        acc_f.add(abs_pow(vf, p));
        for (std::size_t i = 0; i < m; ++i) {
            const cplx scaled = lambdas[i] * vf;
            acc_c[i].add(abs_pow(vg + scaled, p));
            acc_s[i].add(abs_pow(scaled, p));
        }
    }
    PencilMeans out;
    out.g = acc_g.value() / n_points;
    out.f = acc_f.value() / n_points;
    for (std::size_t i = 0; i < m; ++i) {
        out.combined.push_back(acc_c[i].value() / n_points);
        out.scaled.push_back(acc_s[i].value() / n_points);
    }
    return out;
}

PencilSweep radial_sweep_pencil(const FunctionExpr& g, const FunctionExpr& f,
                                std::span<const double> lambdas, double p, const ArcSpec& arc,
                                const RadialSweep& sweep, const ResolutionLaw& law)
{
    const auto radii = sweep.radii();
    std::vector<PencilMeans> means(radii.size());
    std::vector<int> points(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        points[i] = law.points(radii[i], arc);
        means[i] = arc_mean_power_pencil(g, f, lambdas, p, radii[i], arc, points[i]);
    });

    auto table = [&](std::string name, auto&& value) {
        SweepTable t;
        t.function = std::move(name);
        t.p = p;
        t.arc = arc;
        for (std::size_t i = 0; i < radii.size(); ++i)
            t.rows.push_back(SweepRow{static_cast<int>(i) + 1, radii[i], -std::log1p(-radii[i]),
                                      value(means[i]), points[i]});
        return t;
    };
    PencilSweep out;
    out.g = table(g.to_string(), [](const PencilMeans& pm) { return pm.g; });
    out.f = table(f.to_string(), [](const PencilMeans& pm) { return pm.f; });
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const std::string lam = format_double(lambdas[i]);
        out.combined.push_back(table("(" + g.to_string() + ") + " + lam + "*(" + f.to_string() + ")",
                                     [i](const PencilMeans& pm) { return pm.combined[i]; }));
        out.scaled.push_back(table(lam + "*(" + f.to_string() + ")",
                                   [i](const PencilMeans& pm) { return pm.scaled[i]; }));
    }
    return out;
}

SupEstimate sup_on_arc(const FunctionExpr& expr, const ArcSpec& arc, const RadialSweep& sweep,
                       const ResolutionLaw& law)
{
    return sup_on_arc_diff(expr, FunctionExpr::zero(), arc, sweep, law);
}

SupEstimate sup_on_arc_diff(const FunctionExpr& f, const FunctionExpr& g, const ArcSpec& arc,
                            const RadialSweep& sweep, const ResolutionLaw& law)
{
    const auto radii = sweep.radii();
    std::vector<double> per(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        per[i] = arc_max_modulus_diff(f, g, radii[i], arc, law.points(radii[i], arc));
    });
    return finish_sup(std::move(per), sweep);
}

} // namespace hardylab
