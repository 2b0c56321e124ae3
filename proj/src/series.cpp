#include "hardylab/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hardylab {

namespace {

bool all_finite(const std::vector<cplx>& v)
{
    return std::all_of(v.begin(), v.end(), [](cplx c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

cplx unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// w = 1 - z e^{-i omega} at z = r e^{i theta}, computed from delta = 1 - r and
// 1 - cos(phi) = 2 sin^2(phi/2) so the real part never cancels.
cplx boundary_factor(double r, double theta, double omega)
{
    const double half = 0.5 * (theta - omega);
    const double s = std::sin(half);
    const double c = std::cos(half);
    const double delta = 1.0 - r;
    return {delta + 2.0 * r * s * s, -2.0 * r * s * c};
}

cplx boundary_factor(cplx z, double omega) { return 1.0 - z * unit(-omega); }

cplx log_w(cplx w) { return {0.5 * std::log(std::norm(w)), std::atan2(w.imag(), w.real())}; }

// (e^u - 1) without cancellation for small |u|.
cplx expm1_complex(cplx u)
{
    const double sb = std::sin(0.5 * u.imag());
    const double re = std::expm1(u.real()) * std::cos(u.imag()) - 2.0 * sb * sb;
    const double im = std::exp(u.real()) * std::sin(u.imag());
    return {re, im};
}

cplx eval_term(const PolynomialTerm& t, cplx z)
{
    cplx acc = 0.0;
    for (auto it = t.coeffs.rbegin(); it != t.coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

cplx eval_power(const PowerTerm& t, cplx w) { return t.coef * std::exp(-t.gamma * log_w(w)); }

cplx eval_primitive(const PrimitiveTerm& t, cplx w)
{
    const cplx lw = log_w(w);
    if (t.mu == 0.0)
        return t.coef * lw;
    return t.coef * expm1_complex(t.mu * lw) / t.mu;
}

// Series of w^{-gamma} = (1 - z e^{-i omega})^{-gamma} for any real gamma.
std::vector<cplx> w_power_coefficients(double omega, double gamma, int n_max, cplx lead)
{
    std::vector<cplx> a(static_cast<std::size_t>(n_max) + 1);
    const cplx rot = unit(-omega);
    a[0] = lead;
    for (int n = 0; n < n_max; ++n) {
        a[n + 1] = a[n] * ((gamma + n) / (n + 1.0)) * rot;
        if (!std::isfinite(a[n + 1].real()) || !std::isfinite(a[n + 1].imag()))
            throw std::overflow_error("power series coefficient overflow at n = " +
                                      std::to_string(n + 1));
    }
    return a;
}

std::string format_complex(cplx c)
{
    if (c.imag() == 0.0)
        return format_double(c.real());
    return "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
}

} // namespace

double normalize_angle(double omega)
{
    if (!std::isfinite(omega))
        throw std::invalid_argument("angle must be finite");
    double r = std::remainder(omega, two_pi);
    if (r <= -std::numbers::pi)
        r += two_pi;
    return r;
}

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool ArcSpec::contains_angle(double omega) const noexcept
{
    if (is_full_circle())
        return true;
    // Shift omega into [a, a + 2 pi) and compare.
    double t = std::fmod(omega - a_, two_pi);
    if (t < 0)
        t += two_pi;
    return t <= b_ - a_;
}

// ---------------------------------------------------------------- TaylorSeries

TaylorSeries::TaylorSeries(std::vector<cplx> coefficients)
    : coeffs_(std::move(coefficients))
{
    if (coeffs_.empty())
        throw std::invalid_argument("TaylorSeries needs at least one coefficient");
    if (!all_finite(coeffs_))
        throw std::invalid_argument("TaylorSeries coefficients must be finite");
}

cplx TaylorSeries::horner(cplx z) const noexcept
{
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

TaylorSeries TaylorSeries::derivative() const
{
    if (coeffs_.size() == 1)
        return TaylorSeries({cplx{0.0}});
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t n = 1; n < coeffs_.size(); ++n)
        d[n - 1] = coeffs_[n] * static_cast<double>(n);
    return TaylorSeries(std::move(d));
}

PowerSingularity PowerSingularity::make(double omega, double gamma, cplx scale)
{
    if (!std::isfinite(gamma) || gamma <= 0.0)
        throw std::invalid_argument("power singularity needs gamma > 0, got " +
                                    format_double(gamma));
    if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
        throw std::invalid_argument("power singularity scale must be finite");
    return {normalize_angle(omega), gamma, scale};
}

TaylorSeries power_singularity_series(double omega, double gamma, int n_max, cplx scale)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("power_singularity_series: gamma must be > 0");
    if (n_max < 0)
        throw std::invalid_argument("power_singularity_series: N must be >= 0");
    const double om = normalize_angle(omega);
    // (e^{i om} - z)^{-gamma} = e^{-i om gamma} (1 - z e^{-i om})^{-gamma}
    return TaylorSeries(w_power_coefficients(om, gamma, n_max, scale * unit(-om * gamma)));
}

TaylorSeries primitive_series(const TaylorSeries& ts)
{
    const auto a = ts.coefficients();
    std::vector<cplx> b(a.size() + 1);
    b[0] = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n)
        b[n + 1] = a[n] / static_cast<double>(n + 1);
    return TaylorSeries(std::move(b));
}

// ---------------------------------------------------------------- FunctionExpr

PowerTerm PowerTerm::make(cplx scale, double omega, double gamma)
{
    const double om = normalize_angle(omega);
    return {scale, om, gamma, scale * unit(-om * gamma)};
}

FunctionExpr FunctionExpr::constant(cplx c) { return polynomial({c}); }

FunctionExpr FunctionExpr::polynomial(std::vector<cplx> coeffs)
{
    if (!all_finite(coeffs))
        throw std::invalid_argument("polynomial coefficients must be finite");
    return from_terms({PolynomialTerm{std::move(coeffs)}});
}

FunctionExpr FunctionExpr::power(const PowerSingularity& ps)
{
    return from_terms({PowerTerm::make(ps.scale, ps.omega, ps.gamma)});
}

FunctionExpr FunctionExpr::from_terms(std::vector<Term> terms)
{
    FunctionExpr e;
    e.terms_ = std::move(terms);
    e.normalize();
    return e;
}

void FunctionExpr::normalize()
{
    std::vector<cplx> poly;
    std::vector<PowerTerm> powers;
    std::vector<PrimitiveTerm> prims;

    for (const Term& t : terms_) {
        if (const auto* p = std::get_if<PolynomialTerm>(&t)) {
            if (poly.size() < p->coeffs.size())
                poly.resize(p->coeffs.size());
            for (std::size_t n = 0; n < p->coeffs.size(); ++n)
                poly[n] += p->coeffs[n];
        } else if (const auto* s = std::get_if<PowerTerm>(&t)) {
            auto it = std::find_if(powers.begin(), powers.end(), [&](const PowerTerm& q) {
                return q.omega == s->omega && q.gamma == s->gamma;
            });
            if (it == powers.end())
                powers.push_back(*s);
            else
                *it = PowerTerm::make(it->scale + s->scale, it->omega, it->gamma);
        } else {
            const auto& l = std::get<PrimitiveTerm>(t);
            auto it = std::find_if(prims.begin(), prims.end(), [&](const PrimitiveTerm& q) {
                return q.omega == l.omega && q.mu == l.mu;
            });
            if (it == prims.end())
                prims.push_back(l);
            else
                it->coef += l.coef;
        }
    }

    for (cplx& c : poly)
        if (std::abs(c) < prune_threshold)
            c = 0.0;
    while (!poly.empty() && poly.back() == cplx{0.0})
        poly.pop_back();

    terms_.clear();
    if (!poly.empty())
        terms_.emplace_back(PolynomialTerm{std::move(poly)});
    for (const auto& s : powers)
        if (std::abs(s.scale) >= prune_threshold)
            terms_.emplace_back(s);
    for (const auto& l : prims)
        if (std::abs(l.coef) >= prune_threshold)
            terms_.emplace_back(l);
}

cplx FunctionExpr::eval(cplx z) const
{
    if (!(std::abs(z) < 1.0))
        throw std::domain_error("eval: |z| must be < 1, got |z| = " + format_double(std::abs(z)));
    cplx acc = 0.0;
    for (const Term& t : terms_) {
        if (const auto* p = std::get_if<PolynomialTerm>(&t))
            acc += eval_term(*p, z);
        else if (const auto* s = std::get_if<PowerTerm>(&t))
            acc += eval_power(*s, boundary_factor(z, s->omega));
        else {
            const auto& l = std::get<PrimitiveTerm>(t);
            acc += eval_primitive(l, boundary_factor(z, l.omega));
        }
    }
    return acc;
}

cplx FunctionExpr::eval_polar(double r, double theta) const
{
    if (!(r >= 0.0 && r < 1.0))
        throw std::domain_error("eval_polar: radius must lie in [0, 1), got " + format_double(r));
    cplx acc = 0.0;
    for (const Term& t : terms_) {
        if (const auto* p = std::get_if<PolynomialTerm>(&t))
            acc += eval_term(*p, std::polar(r, theta));
        else if (const auto* s = std::get_if<PowerTerm>(&t))
            acc += eval_power(*s, boundary_factor(r, theta, s->omega));
        else {
            const auto& l = std::get<PrimitiveTerm>(t);
            acc += eval_primitive(l, boundary_factor(r, theta, l.omega));
        }
    }
    return acc;
}

std::vector<double> FunctionExpr::singular_angles() const
{
    std::vector<double> out;
    for (const Term& t : terms_) {
        if (const auto* s = std::get_if<PowerTerm>(&t))
            out.push_back(s->omega);
        else if (const auto* l = std::get_if<PrimitiveTerm>(&t))
            out.push_back(l->omega);
    }
    return out;
}

const PowerTerm* FunctionExpr::single_power_term() const noexcept
{
    if (terms_.size() != 1)
        return nullptr;
    return std::get_if<PowerTerm>(&terms_.front());
}

std::string FunctionExpr::to_string() const
{
    if (primitive_of_)
        return "F(" + primitive_of_->to_string() + ")";
    if (terms_.empty())
        return "poly:0";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
        if (!first)
            os << " + ";
        first = false;
        if (const auto* p = std::get_if<PolynomialTerm>(&t)) {
            os << "poly:";
            for (std::size_t n = 0; n < p->coeffs.size(); ++n)
                os << (n ? "," : "") << format_complex(p->coeffs[n]);
        } else if (const auto* s = std::get_if<PowerTerm>(&t)) {
            if (s->scale != cplx{1.0})
                os << format_complex(s->scale) << "*";
            os << "pow:omega=" << format_double(s->omega) << ",gamma=" << format_double(s->gamma);
        } else {
            const auto& l = std::get<PrimitiveTerm>(t);
            os << format_complex(l.coef) << "*prim:omega=" << format_double(l.omega)
               << ",mu=" << format_double(l.mu);
        }
    }
    return os.str();
}

FunctionExpr FunctionExpr::operator-() const { return cplx{-1.0} * *this; }

FunctionExpr operator+(const FunctionExpr& a, const FunctionExpr& b)
{
    std::vector<Term> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return FunctionExpr::from_terms(std::move(t));
}

FunctionExpr operator-(const FunctionExpr& a, const FunctionExpr& b) { return a + (-b); }

FunctionExpr operator*(cplx s, const FunctionExpr& f)
{
    std::vector<Term> t;
    t.reserve(f.terms_.size());
    for (const Term& term : f.terms_) {
        if (const auto* p = std::get_if<PolynomialTerm>(&term)) {
            PolynomialTerm q = *p;
            for (cplx& c : q.coeffs)
                c *= s;
            t.emplace_back(std::move(q));
        } else if (const auto* w = std::get_if<PowerTerm>(&term)) {
            t.emplace_back(PowerTerm::make(s * w->scale, w->omega, w->gamma));
        } else {
            PrimitiveTerm l = std::get<PrimitiveTerm>(term);
            l.coef *= s;
            t.emplace_back(l);
        }
    }
    return FunctionExpr::from_terms(std::move(t));
}

FunctionExpr primitive_expr(const FunctionExpr& expr)
{
    std::vector<Term> out;
    for (const Term& t : expr.terms()) {
        if (const auto* p = std::get_if<PolynomialTerm>(&t)) {
            std::vector<cplx> q(p->coeffs.size() + 1);
            for (std::size_t n = 0; n < p->coeffs.size(); ++n)
                q[n + 1] = p->coeffs[n] / static_cast<double>(n + 1);
            out.emplace_back(PolynomialTerm{std::move(q)});
        } else if (const auto* s = std::get_if<PowerTerm>(&t)) {
            // d/dz E_mu(w) = -e^{-i omega} w^{mu - 1}, so the primitive of coef w^{-gamma}
            // is -coef e^{i omega} E_{1 - gamma}(w).
            out.emplace_back(PrimitiveTerm{-s->coef * unit(s->omega), s->omega, 1.0 - s->gamma});
        } else {
            throw std::invalid_argument("primitive_expr: primitives of primitive terms are not supported");
        }
    }
    FunctionExpr result = FunctionExpr::from_terms(std::move(out));
    result.primitive_of_ = std::make_shared<const FunctionExpr>(expr);
    return result;
}

TaylorSeries taylor_series(const FunctionExpr& expr, int n_max)
{
    if (n_max < 0)
        throw std::invalid_argument("taylor_series: N must be >= 0");
    std::vector<cplx> acc(static_cast<std::size_t>(n_max) + 1);
    auto add = [&](const std::vector<cplx>& v) {
        for (std::size_t n = 0; n < acc.size() && n < v.size(); ++n)
            acc[n] += v[n];
    };
    for (const Term& t : expr.terms()) {
        if (const auto* p = std::get_if<PolynomialTerm>(&t)) {
            add(p->coeffs);
        } else if (const auto* s = std::get_if<PowerTerm>(&t)) {
            add(w_power_coefficients(s->omega, s->gamma, n_max, s->coef));
        } else {
            // E_mu(w) is the primitive of -e^{-i omega} w^{mu - 1}, scaled by coef.
            const auto& l = std::get<PrimitiveTerm>(t);
            const cplx lead = -l.coef * unit(-l.omega);
            TaylorSeries d(n_max > 0 ? w_power_coefficients(l.omega, 1.0 - l.mu, n_max - 1, lead)
                                     : std::vector<cplx>{lead});
            const auto prim = primitive_series(d);
            add({prim.coefficients().begin(), prim.coefficients().end()});
        }
    }
    return TaylorSeries(std::move(acc));
}

std::vector<cplx> eval_on_arc_grid(const FunctionExpr& expr, double r, const ArcSpec& arc,
                                   int n_points)
{
    if (!(r > 0.0 && r < 1.0))
        throw std::domain_error("eval_on_arc_grid: need 0 < r < 1");
    if (n_points < 2)
        throw std::invalid_argument("eval_on_arc_grid: need at least 2 points");
    std::vector<cplx> out(static_cast<std::size_t>(n_points));
    const double h = arc.length() / n_points;
    for (int k = 0; k < n_points; ++k)
        out[k] = expr.eval_polar(r, arc.a() + (k + 0.5) * h);
    return out;
}

} // namespace hardylab
