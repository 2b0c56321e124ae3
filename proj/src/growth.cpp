#include "hardylab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hardylab {

std::string_view to_string(GrowthVerdict v)
{
    switch (v) {
    case GrowthVerdict::Bounded: return "bounded";
    case GrowthVerdict::DivergentPower: return "divergent_power";
    case GrowthVerdict::DivergentLog: return "divergent_log";
    case GrowthVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

GrowthVerdict growth_verdict_from_string(std::string_view s)
{
    if (s == "bounded") return GrowthVerdict::Bounded;
    if (s == "divergent_power") return GrowthVerdict::DivergentPower;
    if (s == "divergent_log") return GrowthVerdict::DivergentLog;
    if (s == "inconclusive") return GrowthVerdict::Inconclusive;
    throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

namespace {

struct ModelFit {
    double beta = 0.0;
    double a = 0.0;
    double c = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

double basis(double beta, double t)
{
    return std::abs(beta) < 1e-12 ? t : std::expm1(beta * t) / beta;
}

// Weighted least squares for (A, C) at fixed beta; weights are 1/v so the residuals are
// relative and large-exponent tails do not swamp the early samples.
ModelFit solve_linear(double beta, std::span<const double> x, std::span<const double> v,
                      std::span<const double> w)
{
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double f = basis(beta, x[k] - x[0]);
        const double w2 = w[k] * w[k];
        s11 += w2;
        s12 += w2 * f;
        s22 += w2 * f * f;
        b1 += w2 * v[k];
        b2 += w2 * f * v[k];
    }
    ModelFit out;
    out.beta = beta;
    const double det = s11 * s22 - s12 * s12;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det))
        return out;
    out.a = (b1 * s22 - b2 * s12) / det;
    out.c = (s11 * b2 - s12 * b1) / det;
    double sse = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = w[k] * (out.a + out.c * basis(beta, x[k] - x[0]) - v[k]);
        sse += r * r;
    }
    out.sse = std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
    return out;
}

ModelFit fit_model(std::span<const double> x, std::span<const double> v, std::span<const double> w)
{
    constexpr double lo = -4.0, hi = 10.0, step = 0.01;
    ModelFit best;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) {
        ModelFit f = solve_linear(lo + i * step, x, v, w);
        if (f.sse < best.sse)
            best = f;
    }
    // Golden-section refinement inside the neighbouring grid cells.
    double a = std::max(lo, best.beta - step), b = std::min(hi, best.beta + step);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c1 = b - g * (b - a), c2 = a + g * (b - a);
    ModelFit f1 = solve_linear(c1, x, v, w), f2 = solve_linear(c2, x, v, w);
    for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        if (f1.sse < f2.sse) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - g * (b - a);
            f1 = solve_linear(c1, x, v, w);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + g * (b - a);
            f2 = solve_linear(c2, x, v, w);
        }
    }
    for (const ModelFit& f : {f1, f2})
        if (f.sse < best.sse)
            best = f;
    return best;
}

struct LineFit {
    double slope = 0.0;
    double r2 = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> v)
{
    const double n = static_cast<double>(x.size());
    double mx = 0, mv = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        mv += v[k];
    }
    mx /= n;
    mv /= n;
    double sxx = 0, sxv = 0, svv = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxv += (x[k] - mx) * (v[k] - mv);
        svv += (v[k] - mv) * (v[k] - mv);
    }
    LineFit out;
    if (sxx <= 0)
        return out;
    out.slope = sxv / sxx;
    out.r2 = svv > 0 ? (sxv * sxv) / (sxx * svv) : 1.0;
    return out;
}

// Local exponents from consecutive triples on a uniform x grid, then Aitken's delta^2
// on the last ones. Returns NaN when the sequence is too short, noisy or unstable.
double extrapolated_exponent(std::span<const double> x, std::span<const double> v)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (x.size() < 6)
        return nan;
    const double h = x[1] - x[0];
    for (std::size_t k = 1; k + 1 < x.size(); ++k)
        if (std::abs((x[k + 1] - x[k]) - h) > 1e-9 * h)
            return nan;

    std::vector<double> local;
    for (std::size_t k = 0; k + 2 < v.size(); ++k) {
        const double d1 = v[k + 1] - v[k];
        const double d2 = v[k + 2] - v[k + 1];
        if (!(d1 > 0 && d2 > 0))
            return nan;
        local.push_back(std::log(d2 / d1) / h);
    }
    const std::size_t n = local.size();
    const double b0 = local[n - 4], b1 = local[n - 3], b2 = local[n - 2], b3 = local[n - 1];
    if (std::abs(b3 - b2) <= 1e-7)
        return b3;
    auto aitken = [](double p, double q, double r) {
        const double den = (r - q) - (q - p);
        if (std::abs(den) < 1e-14)
            return std::numeric_limits<double>::quiet_NaN();
        return r - (r - q) * (r - q) / den;
    };
    const double a_prev = aitken(b0, b1, b2);
    const double a_last = aitken(b1, b2, b3);
    if (!std::isfinite(a_prev) || !std::isfinite(a_last))
        return nan;
    if (std::abs(a_last - a_prev) > 0.01 || std::abs(a_last - b3) > 0.1)
        return nan;
    return a_last;
}

} // namespace

GrowthFit classify_growth(std::span<const double> x, std::span<const double> v,
                          const GrowthThresholds& th)
{
    if (x.size() != v.size())
        throw std::invalid_argument("classify_growth: x and v differ in length");
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!std::isfinite(x[k]) || !std::isfinite(v[k]))
            throw std::invalid_argument("classify_growth: non-finite sample");
    for (std::size_t k = 1; k < x.size(); ++k)
        if (!(x[k] > x[k - 1]))
            throw std::invalid_argument("classify_growth: x must be strictly increasing");

    GrowthFit out;
    const std::size_t n = v.size();
    if (n == 0)
        return out;
    out.last = v.back();
    out.max = *std::max_element(v.begin(), v.end());
    out.limit = out.max;

    const std::size_t half = (n + 1) / 2;
    const std::size_t window = std::min(n, std::max<std::size_t>(half, 6));
    out.window = static_cast<int>(window);
    const auto xs = x.subspan(n - window);
    const auto vs = v.subspan(n - window);

    const double vmax = *std::max_element(vs.begin(), vs.end());
    const double vmin = *std::min_element(vs.begin(), vs.end());
    if (vmax <= 0.0 || (vmax - vmin) <= th.flat_rel * std::abs(vmax)) {
        out.verdict = GrowthVerdict::Bounded;
        out.r2 = 1.0;
        return out;
    }
    if (n < 4)
        return out;

    std::vector<double> w(window);
    for (std::size_t k = 0; k < window; ++k)
        w[k] = 1.0 / (vs[k] > 0 ? vs[k] : vmax);

    const ModelFit fit = fit_model(xs, vs, w);
    out.window_exponent = fit.beta;
    {
        double mean = 0, wsum = 0;
        for (std::size_t k = 0; k < window; ++k) {
            mean += w[k] * w[k] * vs[k];
            wsum += w[k] * w[k];
        }
        mean /= wsum;
        double sst = 0;
        for (std::size_t k = 0; k < window; ++k)
            sst += w[k] * w[k] * (vs[k] - mean) * (vs[k] - mean);
        out.r2 = sst > 0 ? std::clamp(1.0 - fit.sse / sst, 0.0, 1.0) : 1.0;
    }

    const double ext = extrapolated_exponent(xs, vs);
    out.extrapolated = std::isfinite(ext);
    out.exponent = out.extrapolated ? ext : fit.beta;

    const LineFit line = fit_line(xs, vs);
    out.log_rate = line.slope;

    auto mark_bounded = [&] {
        out.verdict = GrowthVerdict::Bounded;
        if (fit.beta < 0 && fit.c > 0) {
            const double lim = fit.a - fit.c / fit.beta;
            if (std::isfinite(lim))
                out.limit = std::max(out.max, lim);
        }
    };

    if (vs.back() <= vs.front()) {
        mark_bounded();
        return out;
    }
    if (out.exponent >= th.power_min) {
        out.verdict = GrowthVerdict::DivergentPower;
        return out;
    }
    if (out.exponent <= th.bounded_max) {
        mark_bounded();
        return out;
    }
    if (line.slope > 0 && line.r2 >= th.log_r2_min) {
        out.verdict = GrowthVerdict::DivergentLog;
        return out;
    }
    const std::size_t tail = std::min<std::size_t>(5, window);
    const double first = vs[window - tail];
    if (first > 0 && (vs.back() - first) / first < th.settle_rel) {
        mark_bounded();
        return out;
    }
    out.verdict = GrowthVerdict::Inconclusive;
    return out;
}

} // namespace hardylab
