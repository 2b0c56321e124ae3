#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace hardylab {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Closed angular interval [A, B] in radians.
///
/// Spans of at least 2*pi are stored as the full circle [0, 2*pi].
class ArcSpec {
public:
    ArcSpec(double a, double b)
    {
        if (!(a < b))
            throw std::invalid_argument("arc: expected A < B, got [" + std::to_string(a) + ", " +
                                        std::to_string(b) + "]");
        if (b - a >= two_pi) {
            a_ = 0.0;
            b_ = two_pi;
        } else {
            a_ = a;
            b_ = b;
        }
    }

    static ArcSpec full_circle() { return {0.0, two_pi}; }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double length() const noexcept { return b_ - a_; }
    double midpoint() const noexcept { return 0.5 * (a_ + b_); }
    bool is_full_circle() const noexcept { return a_ == 0.0 && b_ == two_pi; }

    /// True when the direction `omega` (mod 2*pi) lies in the closed arc.
    bool contains_angle(double omega) const noexcept;

    friend bool operator==(const ArcSpec&, const ArcSpec&) = default;

private:
    double a_ = 0.0;
    double b_ = two_pi;
};

} // namespace hardylab
