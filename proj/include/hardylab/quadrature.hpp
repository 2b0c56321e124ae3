#pragma once

// Arc means (1/(B-A)) int_A^B |f(r e^{i theta})|^p d theta by the composite midpoint
// rule, and radial sweeps r_k -> 1 standing in for sup over 0 < r < 1.

#include "hardylab/arc.hpp"
#include "hardylab/growth.hpp"
#include "hardylab/series.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace hardylab {

/// n_points(r) = max(min_points, ceil(per_width * scale * (B - A) / (1 - r))).
///
/// The peak of |e^{i omega} - r e^{i theta}|^{-gamma} has angular width ~ (1 - r), so
/// per_width is the number of samples that land inside it.
struct ResolutionLaw {
    int min_points = 256;
    double per_width = 64.0;
    double scale = 1.0;

    int points(double r, const ArcSpec& arc) const;
    nlohmann::json to_json() const;
};

class RadialSweep {
public:
    /// Throws std::invalid_argument unless 0 < r_1 < ... < r_K < 1.
    explicit RadialSweep(std::vector<double> radii);

    std::span<const double> radii() const noexcept { return radii_; }
    std::size_t size() const noexcept { return radii_.size(); }

private:
    std::vector<double> radii_;
};

/// r_k = 1 - 2^{-k}, k = 1..k_max, 1 <= k_max <= 40.
RadialSweep default_sweep(int k_max);

/// r_k = 1 - width 2^{-k}, k = 1..k_max, 0 < width <= 1. Starts the sweep once the
/// distance to the circle is below width, for arcs of length comparable to width.
RadialSweep scaled_sweep(double width, int k_max);

struct SweepRow {
    int k;         ///< 1-based row index
    double r;
    double x;      ///< -ln(1 - r)
    double value;  ///< arc mean of |f|^p at radius r
    int n_points;
};

struct SweepTable {
    std::string function;
    double p = 1.0;
    ArcSpec arc = ArcSpec::full_circle();
    std::vector<SweepRow> rows;

    double sup() const;
    std::vector<double> xs() const;
    std::vector<double> values() const;

    /// Growth classification of the value column.
    GrowthFit growth(const GrowthThresholds& th = {}) const;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Midpoint-rule arc mean of |f|^p with n_points cells. Requires p > 0, 0 < r < 1 and
/// n_points >= 16; throws std::runtime_error on a non-finite sample.
double arc_mean_power(const FunctionExpr& expr, double p, double r, const ArcSpec& arc,
                      int n_points);

/// Same rule applied to |f - g| evaluated pointwise, so the result is symmetric in f, g
/// to the last bit and exactly 0 for f = g.
double arc_mean_power_diff(const FunctionExpr& f, const FunctionExpr& g, double p, double r,
                           const ArcSpec& arc, int n_points);

/// Largest |f - g| over the midpoint grid of the arc at radius r.
double arc_max_modulus_diff(const FunctionExpr& f, const FunctionExpr& g, double r,
                            const ArcSpec& arc, int n_points);

SweepTable radial_sweep(const FunctionExpr& expr, double p, const ArcSpec& arc,
                        const RadialSweep& sweep, const ResolutionLaw& law = {});

/// Sweep of the arc mean of |f - g|^p (rows computed in parallel).
SweepTable radial_sweep_diff(const FunctionExpr& f, const FunctionExpr& g, double p,
                             const ArcSpec& arc, const RadialSweep& sweep,
                             const ResolutionLaw& law = {});

/// Arc means of |g|^p, |f|^p, |g + lambda_i f|^p and |lambda_i f|^p on one midpoint grid,
/// with g and f evaluated once per node.
struct PencilMeans {
    double g = 0.0;
    double f = 0.0;
    std::vector<double> combined;
    std::vector<double> scaled;
};

PencilMeans arc_mean_power_pencil(const FunctionExpr& g, const FunctionExpr& f,
                                  std::span<const double> lambdas, double p, double r,
                                  const ArcSpec& arc, int n_points);

struct PencilSweep {
    SweepTable g;
    SweepTable f;
    std::vector<SweepTable> combined; ///< one table per lambda
    std::vector<SweepTable> scaled;
};

PencilSweep radial_sweep_pencil(const FunctionExpr& g, const FunctionExpr& f,
                                std::span<const double> lambdas, double p, const ArcSpec& arc,
                                const RadialSweep& sweep, const ResolutionLaw& law = {});

/// sup over the sweep radii and the arc grid of |f|, the p = infinity mode.
struct SupEstimate {
    double value = 0.0;               ///< max over the sweep
    bool escaping = false;            ///< numerical stand-in for an infinite sup
    std::vector<double> per_radius;   ///< max over the grid at each radius
    GrowthFit growth;                 ///< classification of the per-radius maxima

    nlohmann::json to_json() const;
};

/// Escaping when the per-radius maximum grows by a factor >= 1.5 over the last three
/// radii, or when the maxima classify as divergent (catches logarithmic growth, which
/// never triggers the factor test).
SupEstimate sup_on_arc(const FunctionExpr& expr, const ArcSpec& arc, const RadialSweep& sweep,
                       const ResolutionLaw& law = {});

SupEstimate sup_on_arc_diff(const FunctionExpr& f, const FunctionExpr& g, const ArcSpec& arc,
                            const RadialSweep& sweep, const ResolutionLaw& law = {});

nlohmann::json arc_to_json(const ArcSpec& arc);

} // namespace hardylab
