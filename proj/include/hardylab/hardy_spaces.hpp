#pragma once

// Metrics of H^p, of the localized spaces H^p_[A,B] and of intersections of such
// spaces, plus membership predicates (closed form for power singularities, numerical
// growth classification for anything else).

#include "hardylab/arc.hpp"
#include "hardylab/growth.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/series.hpp"

#include <json.hpp>

#include <limits>
#include <vector>

namespace hardylab {

inline constexpr double infinite_exponent = std::numeric_limits<double>::infinity();

struct MetricParams {
    double p = 1.0;                       ///< in (0, inf]; use infinite_exponent for H^inf
    ArcSpec arc = ArcSpec::full_circle(); ///< proper arcs select the localized metric
    int compact_sup_terms = 8;            ///< n = 2..M+1 terms of the compact-sup series
    RadialSweep sweep = default_sweep(18);
    ResolutionLaw law{};

    void validate() const;
};

struct MetricEstimate {
    double value = 0.0;        ///< +inf when escaping
    bool escaping = false;     ///< f - g does not belong to the space
    double boundary_part = 0.0;///< sup over the sweep of the arc term (finite even when escaping)
    double compact_part = 0.0; ///< truncated sum over compact discs (localized metrics only)
};

/// d_p(f, g). For 0 < p < 1 the sup over r of the arc mean of |f - g|^p; for 1 <= p < inf
/// its 1/p-th power; for p = inf the sup of |f - g|. On a proper arc the localized metric
/// adds sum_{n=2}^{M+1} 2^{-n} s_n/(1 + s_n), s_n = max_{|z| = 1 - 1/n} |f - g|.
MetricEstimate metric_dp(const FunctionExpr& f, const FunctionExpr& g, const MetricParams& params);

struct IntersectionParams {
    double target = 1.0;       ///< a in (0, inf]
    std::vector<double> p_seq; ///< strictly increasing, all < target

    void validate() const;
};

/// sum_{n=1}^{L} 2^{-n} d_{p_n}/(1 + d_{p_n}); an escaping d_{p_n} contributes 2^{-n}.
MetricEstimate metric_intersection(const FunctionExpr& f, const FunctionExpr& g,
                                   const IntersectionParams& iparams, const MetricParams& base);

enum class ClosedFormMembership { Member, NonMember, Boundary };

std::string_view to_string(ClosedFormMembership m);

/// (e^{i omega} - z)^{-gamma} is in H^p iff p < 1/gamma. Band |p gamma - 1| <= 1e-9 is
/// Boundary except p gamma == 1 exactly, which is NonMember.
ClosedFormMembership closed_form_membership(const PowerSingularity& ps, double p);

struct MembershipVerdict {
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    double fitted_exponent = 0.0; ///< estimate of p*gamma - 1 for a power singularity on the arc
    double fit_quality = 0.0;     ///< R^2 of the tail fit
    double sup_estimate = 0.0;    ///< max of the sweep
    double limit_estimate = 0.0;  ///< extrapolated limit r -> 1 when bounded, else sup_estimate
    double p = 1.0;
    ArcSpec arc = ArcSpec::full_circle();
    SweepTable table;

    nlohmann::json to_json(bool with_table = false) const;
};

/// Decides f in H^p_[A,B] numerically from the growth of the arc mean over the sweep.
MembershipVerdict classify_membership(const FunctionExpr& expr, double p, const ArcSpec& arc,
                                      const RadialSweep& sweep, const ResolutionLaw& law = {});

struct IntersectionMembership {
    double target = 1.0;
    std::vector<double> p_values;
    std::vector<MembershipVerdict> verdicts;
    bool member = false; ///< every verdict Bounded
};

/// Classifies at p_l = target (1 - 2^{-l}), l = 1..L, L >= 3.
IntersectionMembership intersection_membership(const FunctionExpr& expr, double target,
                                               const ArcSpec& arc, int grid_size,
                                               const RadialSweep& sweep,
                                               const ResolutionLaw& law = {});

} // namespace hardylab
