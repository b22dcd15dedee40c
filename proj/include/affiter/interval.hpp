#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>

namespace affiter {

// Directed rounding without touching the floating-point environment.
//
// Every primitive computes the round-to-nearest result, recovers the exact
// rounding error with an error-free transformation (TwoSum, FMA) and steps
// to the neighbouring binary64 only when the result was inexact in the wrong
// direction. The outcome is the correctly rounded directed result whenever
// the transformation is exact, and a one-ulp widening otherwise.
namespace rounding {

inline double next_up(double x) noexcept
{
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

inline double next_down(double x) noexcept
{
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

namespace detail {

constexpr double kMax = std::numeric_limits<double>::max();

// Below this magnitude the FMA residual of a product may itself underflow.
constexpr double kFmaSafe = 0x1p-969;

inline double two_sum_err(double a, double b, double s) noexcept
{
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

} // namespace detail

inline double add_down(double a, double b) noexcept
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        if (std::isinf(a) || std::isinf(b)) return s;
        return s > 0 ? detail::kMax : s;
    }
    return detail::two_sum_err(a, b, s) < 0 ? next_down(s) : s;
}

inline double add_up(double a, double b) noexcept
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        if (std::isinf(a) || std::isinf(b)) return s;
        return s < 0 ? -detail::kMax : s;
    }
    return detail::two_sum_err(a, b, s) > 0 ? next_up(s) : s;
}

inline double sub_down(double a, double b) noexcept { return add_down(a, -b); }
inline double sub_up(double a, double b) noexcept { return add_up(a, -b); }

// 0 * inf is taken as 0, the usual convention for interval endpoints.
inline double mul_down(double a, double b) noexcept
{
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = a * b;
    if (!std::isfinite(p)) {
        if (std::isinf(a) || std::isinf(b)) return p;
        return p > 0 ? detail::kMax : p;
    }
    if (std::fabs(p) < detail::kFmaSafe) return next_down(p);
    return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}

inline double mul_up(double a, double b) noexcept
{
    if (a == 0.0 || b == 0.0) return 0.0;
    const double p = a * b;
    if (!std::isfinite(p)) {
        if (std::isinf(a) || std::isinf(b)) return p;
        return p < 0 ? -detail::kMax : p;
    }
    if (std::fabs(p) < detail::kFmaSafe) return next_up(p);
    return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}

// Division by a strictly positive finite divisor.
inline double div_up(double a, double b) noexcept
{
    const double q = a / b;
    if (!std::isfinite(q)) return q;
    if (std::fabs(q) < detail::kFmaSafe || std::fabs(a) < detail::kFmaSafe) return next_up(q);
    // q*b - a < 0 means q undershoots a/b.
    return std::fma(q, b, -a) < 0 ? next_up(q) : q;
}

inline double div_down(double a, double b) noexcept
{
    const double q = a / b;
    if (!std::isfinite(q)) return q;
    if (std::fabs(q) < detail::kFmaSafe || std::fabs(a) < detail::kFmaSafe) return next_down(q);
    return std::fma(q, b, -a) > 0 ? next_down(q) : q;
}

inline double sqrt_up(double x) noexcept
{
    const double r = std::sqrt(x);
    if (!std::isfinite(r) || r == 0.0) return r;
    return std::fma(r, r, -x) < 0 ? next_up(r) : r;
}

} // namespace rounding

/// Closed interval [lo, hi] with binary64 endpoints.
///
/// Endpoints may be infinite (overflow saturates) but never NaN, and the
/// interval is never empty. lo == +inf or hi == -inf is rejected.
class Interval {
public:
    constexpr Interval() noexcept = default;
    /// Degenerate interval [x, x]. Throws std::invalid_argument if x is not finite.
    explicit Interval(double x);
    /// Throws std::invalid_argument unless lo <= hi and both are non-NaN.
    Interval(double lo, double hi);

    [[nodiscard]] constexpr double lo() const noexcept { return lo_; }
    [[nodiscard]] constexpr double hi() const noexcept { return hi_; }

    [[nodiscard]] bool bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }
    [[nodiscard]] constexpr bool degenerate() const noexcept { return lo_ == hi_; }

    /// hi - lo rounded up; +inf for unbounded intervals.
    [[nodiscard]] double wid() const noexcept;
    /// wid / 2 rounded up.
    [[nodiscard]] double rad() const noexcept;
    /// A binary64 inside the interval, as close to the midpoint as rounding allows.
    [[nodiscard]] double mid() const noexcept;

    friend constexpr bool operator==(const Interval&, const Interval&) noexcept = default;

private:
    struct unchecked_tag {};
    constexpr Interval(double lo, double hi, unchecked_tag) noexcept : lo_(lo), hi_(hi) {}

    friend Interval make_unchecked(double lo, double hi) noexcept;

    double lo_ = 0.0;
    double hi_ = 0.0;
};

// Internal constructor for results whose ordering is guaranteed by construction.
inline Interval make_unchecked(double lo, double hi) noexcept
{
    return Interval(lo, hi, Interval::unchecked_tag{});
}

inline Interval operator+(const Interval& a, const Interval& b) noexcept
{
    return make_unchecked(rounding::add_down(a.lo(), b.lo()), rounding::add_up(a.hi(), b.hi()));
}

inline Interval operator-(const Interval& a) noexcept { return make_unchecked(-a.hi(), -a.lo()); }

inline Interval operator-(const Interval& a, const Interval& b) noexcept
{
    return make_unchecked(rounding::sub_down(a.lo(), b.hi()), rounding::sub_up(a.hi(), b.lo()));
}

/// Four-product min/max formula, no sign case analysis.
Interval operator*(const Interval& a, const Interval& b) noexcept;

/// c * b for a finite point scalar c.
inline Interval scale(double c, const Interval& b) noexcept
{
    if (c >= 0.0) return make_unchecked(rounding::mul_down(c, b.lo()), rounding::mul_up(c, b.hi()));
    return make_unchecked(rounding::mul_down(c, b.hi()), rounding::mul_up(c, b.lo()));
}

inline Interval& operator+=(Interval& a, const Interval& b) noexcept { return a = a + b; }

[[nodiscard]] Interval hull(const Interval& a, const Interval& b) noexcept;
[[nodiscard]] constexpr bool contains(const Interval& a, double p) noexcept { return a.lo() <= p && p <= a.hi(); }
[[nodiscard]] constexpr bool subset(const Interval& a, const Interval& b) noexcept
{
    return b.lo() <= a.lo() && a.hi() <= b.hi();
}

std::ostream& operator<<(std::ostream& os, const Interval& x);

} // namespace affiter
