#pragma once

// Experiments on primitives F(f): integrability exponents, blow-up on arcs, total
// unboundedness, Hardy's coefficient inequality, and the perturbation argument that
// unboundedness of T(f) survives g + lambda f.

#include "hardylab/arc.hpp"
#include "hardylab/hardy_spaces.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/series.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hardylab {

inline constexpr const char* report_schema = "hardy-lab/1";

struct ScanResult {
    std::vector<ArcSpec> arcs;
    std::vector<SupEstimate> sups;
    bool totally_unbounded = false; ///< every arc escapes

    std::vector<bool> escaping() const;
    nlohmann::json to_json() const;
};

/// Splits [0, 2 pi] into n_arcs equal arcs (n_arcs >= 4) and runs sup_on_arc on each.
ScanResult total_unboundedness_scan(const FunctionExpr& f, int n_arcs, const RadialSweep& sweep,
                                    const ResolutionLaw& law = {});

struct BlowupRow {
    double a = 1.0;            ///< infinite_exponent for the sup mode
    ArcSpec arc = ArcSpec::full_circle();
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    double exponent = 0.0;
    double sup = 0.0;
    bool escaping = false;
};

struct BlowupReport {
    std::string function;
    std::string primitive;
    double p = 0.5;
    double q = 1.0;
    MembershipVerdict f_verdict;  ///< f against H^p, full circle
    MembershipVerdict q_verdict;  ///< F(f) against H^q, full circle
    std::vector<BlowupRow> rows;  ///< F(f) against H^a_[A,B]
    ScanResult scan;              ///< sup of |F(f)| on equal arcs

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

/// Builds F = primitive_expr(f) and classifies it at q on the full circle and at every
/// (a, arc) pair; a = infinite_exponent rows use sup_on_arc. Inconclusive rows are kept.
BlowupReport blowup_report(const FunctionExpr& f, double p, const std::vector<double>& a_list,
                           const std::vector<ArcSpec>& arcs, const RadialSweep& sweep,
                           const ResolutionLaw& law = {}, int n_arcs = 8);

struct HardyInequality {
    double lhs = 0.0;        ///< sum_{n<=N} |a_n|/(n + 1) plus the tail slack
    double tail_slack = 0.0; ///< |a_N| ln N
    double rhs = 0.0;        ///< the supplied H^1 norm estimate
    bool holds = false;      ///< lhs <= pi rhs + 1e-8

    nlohmann::json to_json() const;
};

HardyInequality hardy_inequality_check(const TaylorSeries& ts, double h1_norm_estimate);

struct PerturbationStep {
    int n = 1;
    double lambda = 0.5;
    std::vector<double> t_perturbed; ///< T(g + lambda f, r_k)
    std::vector<double> t_scaled;    ///< T(lambda f, r_k), measured
    double min_subadditivity_residual = 0.0; ///< min_k T(g) + T(lambda f) - T(g + lambda f)
    double min_psi_residual = 0.0;           ///< min_k T(g + lambda f) + T(g) - Psi(lambda) T(f)
    double max_homogeneity_error = 0.0;      ///< max_k |T(lambda f) - Psi(lambda) T(f)|, relative
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    bool escaping = false;
};

struct PerturbationReport {
    std::string g;
    std::string f;
    double p = 0.5;
    double a = 2.0;
    double psi_exponent = 1.0; ///< Psi(lambda) = |lambda|^psi_exponent
    ArcSpec arc = ArcSpec::full_circle();
    std::vector<double> radii;
    std::vector<double> t_f;
    std::vector<double> t_g;
    GrowthVerdict g_verdict = GrowthVerdict::Inconclusive;
    std::vector<PerturbationStep> steps;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

/// Residual tolerance for the subadditivity and Psi inequalities, relative once the
/// compared values exceed 1.
inline constexpr double perturbation_tolerance = 1e-8;

/// T(h, r) = mean over the arc of |F(h)(r e^{i theta})|^a for a < 1, and its 1/a-th
/// power for a >= 1; Psi(lambda) = |lambda|^a or |lambda| accordingly. Runs
/// lambda_n = 2^{-n}, n = 1..n_halvings. Throws std::runtime_error naming (n, r) when an
/// inequality residual drops below -perturbation_tolerance.
PerturbationReport perturbation_experiment(const FunctionExpr& g, const FunctionExpr& f, double p,
                                           double a, const ArcSpec& arc, int n_halvings,
                                           const RadialSweep& sweep, const ResolutionLaw& law = {});

} // namespace hardylab
