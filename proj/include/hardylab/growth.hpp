#pragma once

// Growth classification of a sequence v_k sampled at x_k = -ln(1 - r_k).
//
// The tail of the sequence is fitted with
//
//     v(x) = A + C (e^{beta (x - x0)} - 1) / beta        (A + C (x - x0) at beta = 0)
//
// which covers the three regimes met by arc integrals of boundary singularities:
// convergence to A (beta < 0), power blow-up (1 - r)^{-beta} (beta > 0) and
// logarithmic blow-up (beta = 0). For |1 - r e^{i theta}|^{-s} on an arc through the
// singular direction, beta estimates s - 1 in all three regimes.

#include <span>
#include <string>
#include <string_view>

namespace hardylab {

enum class GrowthVerdict { Bounded, DivergentPower, DivergentLog, Inconclusive };

std::string_view to_string(GrowthVerdict v);
GrowthVerdict growth_verdict_from_string(std::string_view s);

inline bool is_divergent(GrowthVerdict v)
{
    return v == GrowthVerdict::DivergentPower || v == GrowthVerdict::DivergentLog;
}

struct GrowthThresholds {
    double power_min = 0.1;      ///< exponent at or above this: DivergentPower
    double bounded_max = -0.02;  ///< exponent at or below this: Bounded
    double log_r2_min = 0.99;    ///< linear-in-x fit quality needed for DivergentLog
    double flat_rel = 1e-13;     ///< relative spread below which the tail counts as constant
    double settle_rel = 0.01;    ///< growth over the last 5 points below which the tail is settled
};

struct GrowthFit {
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    double exponent = 0.0;        ///< reported growth exponent (extrapolated when stable)
    double window_exponent = 0.0; ///< beta of the least-squares fit over the window
    double r2 = 0.0;              ///< quality of the window fit, in [0, 1]
    double log_rate = 0.0;        ///< dv/dx of a straight-line fit over the window
    double last = 0.0;            ///< last sample
    double max = 0.0;             ///< largest sample
    double limit = 0.0;           ///< extrapolated limit when Bounded, else max
    int window = 0;               ///< number of trailing samples used
    bool extrapolated = false;    ///< exponent came from Aitken extrapolation of local exponents
};

/// Classifies the growth of v against x. Both spans must have equal length and x must
/// be strictly increasing; fewer than 4 samples give Inconclusive unless v is constant.
GrowthFit classify_growth(std::span<const double> x, std::span<const double> v,
                          const GrowthThresholds& thresholds = {});

} // namespace hardylab
