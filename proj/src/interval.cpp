#include "affiter/interval.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace affiter {

Interval::Interval(double x) : lo_(x), hi_(x)
{
    if (!std::isfinite(x)) throw std::invalid_argument("Interval: degenerate endpoint must be finite");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("Interval: NaN endpoint");
    if (lo > hi) throw std::invalid_argument("Interval: lo > hi");
    if (lo == std::numeric_limits<double>::infinity() || hi == -std::numeric_limits<double>::infinity())
        throw std::invalid_argument("Interval: empty at infinity");
}

double Interval::wid() const noexcept
{
    if (!bounded()) return std::numeric_limits<double>::infinity();
    return rounding::sub_up(hi_, lo_);
}

double Interval::rad() const noexcept
{
    const double w = wid();
    const double r = 0.5 * w;
    // Halving is exact except in the subnormal range.
    return r + r == w ? r : rounding::next_up(r);
}

double Interval::mid() const noexcept
{
    if (lo_ == hi_) return lo_;
    if (!bounded()) {
        if (std::isfinite(lo_)) return std::numeric_limits<double>::max();
        if (std::isfinite(hi_)) return -std::numeric_limits<double>::max();
        return 0.0;
    }
    // Scaled form avoids overflow of lo + hi.
    const double m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
}

Interval operator*(const Interval& a, const Interval& b) noexcept
{
    using namespace rounding;
    const double lo = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()), mul_down(a.hi(), b.lo()),
                                mul_down(a.hi(), b.hi())});
    const double hi = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()), mul_up(a.hi(), b.lo()),
                                mul_up(a.hi(), b.hi())});
    return make_unchecked(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) noexcept
{
    return make_unchecked(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::ostream& operator<<(std::ostream& os, const Interval& x)
{
    return os << '[' << x.lo() << ", " << x.hi() << ']';
}

} // namespace affiter
