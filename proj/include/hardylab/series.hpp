#pragma once

// Disc functions: truncated Taylor series, power singularities
// (e^{i omega} - z)^{-gamma}, their exact linear combinations and primitives.

#include "hardylab/arc.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace hardylab {

using cplx = std::complex<double>;

/// Coefficients below this modulus are dropped when an expression is normalized.
inline constexpr double prune_threshold = 1e-15;

/// Maps an angle to (-pi, pi].
double normalize_angle(double omega);

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);

class TaylorSeries {
public:
    /// Throws std::invalid_argument when empty or when any coefficient is not finite.
    explicit TaylorSeries(std::vector<cplx> coefficients);

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    std::span<const cplx> coefficients() const noexcept { return coeffs_; }
    cplx operator[](std::size_t n) const { return coeffs_.at(n); }

    cplx horner(cplx z) const noexcept;

    /// Term-wise derivative; order drops by one (a constant stays a constant 0).
    TaylorSeries derivative() const;

    friend bool operator==(const TaylorSeries&, const TaylorSeries&) = default;

private:
    std::vector<cplx> coeffs_;
};

/// scale * (e^{i omega} - z)^{-gamma}, holomorphic on the open disc.
struct PowerSingularity {
    double omega = 0.0; ///< normalized to (-pi, pi]
    double gamma = 1.0; ///< > 0
    cplx scale{1.0, 0.0};

    /// Validating factory: rejects gamma <= 0 or non-finite input, normalizes omega.
    static PowerSingularity make(double omega, double gamma, cplx scale = 1.0);
};

/// First N+1 Taylor coefficients of scale * (e^{i omega} - z)^{-gamma}.
///
/// Uses a_{n+1} = a_n (gamma + n)/(n + 1) e^{-i omega}; throws std::overflow_error
/// if a coefficient leaves the double range.
TaylorSeries power_singularity_series(double omega, double gamma, int n_max, cplx scale = 1.0);

/// b_0 = 0, b_{n+1} = a_n / (n + 1).
TaylorSeries primitive_series(const TaylorSeries& ts);

// Terms of a FunctionExpr. With w = 1 - z e^{-i omega} (Re w > 0 on the disc) every
// fractional power and logarithm below uses the principal branch of w.

struct PolynomialTerm {
    std::vector<cplx> coeffs; ///< coeffs[n] multiplies z^n
};

/// scale * (e^{i omega} - z)^{-gamma} = coef * w^{-gamma}, coef = scale e^{-i omega gamma}.
/// gamma may be any real here; the public PowerSingularity keeps gamma > 0.
struct PowerTerm {
    cplx scale;
    double omega;
    double gamma;
    cplx coef;

    static PowerTerm make(cplx scale, double omega, double gamma);
};

/// coef * E_mu(w) with E_mu(w) = (w^mu - 1)/mu, and E_0(w) = Log w.
/// Produced only by primitive_expr; vanishes at z = 0.
struct PrimitiveTerm {
    cplx coef;
    double omega;
    double mu;
};

using Term = std::variant<PolynomialTerm, PowerTerm, PrimitiveTerm>;

/// Exact finite linear combination of polynomials and boundary singularities.
///
/// Immutable after construction. Terms are kept normalized: one polynomial at most,
/// like singular terms merged, coefficients below prune_threshold removed, so the zero
/// function is exactly the expression with no terms.
class FunctionExpr {
public:
    FunctionExpr() = default;

    static FunctionExpr zero() { return {}; }
    static FunctionExpr constant(cplx c);
    static FunctionExpr polynomial(std::vector<cplx> coeffs);
    static FunctionExpr power(const PowerSingularity& ps);
    static FunctionExpr from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Source expression when this one was produced by primitive_expr, else nullptr.
    const FunctionExpr* primitive_of() const noexcept { return primitive_of_.get(); }

    /// Exact value; throws std::domain_error unless |z| < 1.
    cplx eval(cplx z) const;

    /// Value at r e^{i theta}, 0 < r < 1. Uses 1 - r as the boundary distance so that
    /// w keeps full relative accuracy close to the circle.
    cplx eval_polar(double r, double theta) const;

    /// Directions omega of every singular term.
    std::vector<double> singular_angles() const;

    /// Non-null when the expression is a single PowerTerm.
    const PowerTerm* single_power_term() const noexcept;

    std::string to_string() const;

    FunctionExpr operator-() const;
    friend FunctionExpr operator+(const FunctionExpr& a, const FunctionExpr& b);
    friend FunctionExpr operator-(const FunctionExpr& a, const FunctionExpr& b);
    friend FunctionExpr operator*(cplx s, const FunctionExpr& f);

private:
    friend FunctionExpr primitive_expr(const FunctionExpr& expr);

    void normalize();

    std::vector<Term> terms_;
    std::shared_ptr<const FunctionExpr> primitive_of_;
};

/// Primitive vanishing at 0, in closed form. Throws std::invalid_argument for
/// expressions that already contain primitive terms.
FunctionExpr primitive_expr(const FunctionExpr& expr);

/// Taylor coefficients a_0..a_N of an expression (cross-check oracle away from |z| = 1).
TaylorSeries taylor_series(const FunctionExpr& expr, int n_max);

/// Values at r e^{i theta_k}, theta_k the midpoints of n_points equal cells of the arc.
std::vector<cplx> eval_on_arc_grid(const FunctionExpr& expr, double r, const ArcSpec& arc,
                                   int n_points);

} // namespace hardylab
