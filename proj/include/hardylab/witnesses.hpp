#pragma once

// Witness functions g in H^p whose primitives leave H^a, and the finite part of the
// dense family c_j phi_j + f_j whose nonzero combinations keep that property.

#include "hardylab/arc.hpp"
#include "hardylab/hardy_spaces.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/series.hpp"

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace hardylab {

/// q = p/(1 - p); throws std::invalid_argument unless 0 < p < 1.
double q_of(double p);

/// Midpoint (1 + 1/a + 1/p)/2 of [1 + 1/a, 1/p). Throws std::invalid_argument when
/// a <= q_of(p), i.e. when the interval is empty. a = inf gives (1 + 1/p)/2.
double select_gamma(double p, double a);

struct WitnessSpec {
    double p = 0.5;
    double a = 2.0; ///< may be infinite_exponent
    ArcSpec arc = ArcSpec::full_circle();
    double omega = 0.0;
    double gamma = 1.0;

    nlohmann::json to_json() const;
};

struct Witness {
    WitnessSpec spec;
    FunctionExpr g;
};

/// g = (e^{i omega} - z)^{-gamma}, omega the arc midpoint, gamma = select_gamma(p, a);
/// gamma = 1 when a is infinite.
Witness build_witness(double p, double a, const ArcSpec& arc);

/// g = (e^{i omega} - z)^{-1/p}, omega the arc midpoint, 0 < p <= 1.
Witness build_intersection_witness(double p, const ArcSpec& arc);

/// j-th polynomial (j >= 1) with dyadic-rational coefficients.
///
/// Stage s = 1, 2, ... lists the polynomials of degree <= s whose coefficients have real
/// and imaginary parts k/2^s with |k| <= s 2^s, skipping those already listed in stage
/// s - 1. Within a stage the order is by degree, then lexicographic in the coefficient
/// tuple (constant term first). Complex coefficients are ordered by (rank of imaginary
/// part, rank of real part), where the dyadic values of a stage are ranked by
/// denominator, then magnitude, positive before negative: 0, 1, -1, 2, -2, ..., 1/2,
/// -1/2, 3/2, ... So j = 1 is 0 and j = 2 is the constant 1.
std::vector<cplx> enumerate_rational_polynomials(std::int64_t j);

struct DenseFamilyEntry {
    int j = 1;
    std::vector<cplx> poly;    ///< f_j
    double omega = 0.0;        ///< singular direction of phi_j
    double gamma = 1.0;
    double c = 0.0;            ///< c_j > 0
    double phi_metric = 0.0;   ///< d_p(phi_j, 0) used for c_j
    double scaled_metric = 0.0;///< d_p(c_j phi_j, 0), re-measured

    FunctionExpr phi() const;     ///< (e^{i omega} - z)^{-gamma}
    FunctionExpr element() const; ///< c_j phi_j + f_j
};

struct DenseFamily {
    double p = 0.5;
    double a = 2.0;
    ArcSpec arc = ArcSpec::full_circle();
    std::vector<DenseFamilyEntry> entries;

    nlohmann::json to_json() const;
};

/// omega_j = (A+B)/2 - (B-A) 2^{-(j+1)}, gamma = select_gamma(p, a),
/// c_j = (1/(2 j d_p(phi_j, 0)))^{1/p} with d_p the H^p metric on the given sweep.
///
/// d_p(phi_j, 0) is taken as the larger of the sweep sup and its extrapolated limit, so
/// the bound d_p(c_j phi_j, 0) < 1/j also holds for the limit r -> 1. Throws
/// std::runtime_error when the re-measured d_p(c_j phi_j, 0) differs from
/// c_j^p d_p(phi_j, 0) by more than 1e-6 relative.
DenseFamily build_dense_family(double p, double a, const ArcSpec& arc, int m,
                               const RadialSweep& sweep, const ResolutionLaw& law = {});

struct Combination {
    FunctionExpr f;
    int m = 1;              ///< index of the last nonzero beta
    ArcSpec isolation{0, 1};///< closed interval centred at omega_m free of the other omega_j
};

/// sum_j beta_j (c_j phi_j + f_j) over the first beta.size() entries.
///
/// The isolation interval is centred at omega_m with radius half the distance from
/// omega_m to the nearest of omega_{m-1} (or A when m = 1), omega_{m+1} and (A+B)/2.
/// Throws std::invalid_argument when every beta is zero or beta is longer than the family.
Combination combine(const DenseFamily& family, const std::vector<cplx>& beta);

} // namespace hardylab
