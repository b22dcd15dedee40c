#pragma once

// Independent oracles shared by the test binaries: exact rational evaluation,
// high-precision reference trajectories and samplers.

#include "affiter/box.hpp"
#include "affiter/matrix.hpp"
#include "affiter/random.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace testing {

using rational = boost::multiprecision::cpp_rational;
using big = boost::multiprecision::cpp_bin_float_100;

inline rational exact(double x)
{
    return rational(x);
}

/// The binary64 nearest to r (ties to even are irrelevant for the tolerances used).
inline double nearest(const rational& r)
{
    double d = static_cast<double>(r);
    for (int i = 0; i < 4; ++i) {
        const double up = std::nextafter(d, INFINITY), down = std::nextafter(d, -INFINITY);
        const rational e = abs(r - exact(d));
        if (abs(r - exact(up)) < e)
            d = up;
        else if (abs(r - exact(down)) < e)
            d = down;
        else
            break;
    }
    return d;
}

/// Number of binary64 steps from a to b (b >= a, both finite).
inline long ulp_steps(double a, double b)
{
    long n = 0;
    while (a < b && n < 1000) {
        a = std::nextafter(a, INFINITY);
        ++n;
    }
    return n;
}

inline bool contains(const affiter::Interval& x, const big& v)
{
    return big(x.lo()) <= v && v <= big(x.hi());
}

inline bool contains(const affiter::Box& x, const std::vector<big>& v)
{
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!contains(x[i], v[i])) return false;
    return true;
}

/// A point of x: a corner for the first 2^d-ish samples, uniform afterwards.
inline std::vector<double> sample_point(const affiter::Box& x, affiter::Rng& rng, bool corner)
{
    std::vector<double> p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lo = x[i].lo(), hi = x[i].hi();
        if (corner)
            p[i] = (rng.bits() & 1) ? hi : lo;
        else
            p[i] = std::clamp(lo + (hi - lo) * rng.uniform(), lo, hi);
    }
    return p;
}

/// Real trajectory x_{k+1} = A x_k + b in 100-digit arithmetic, k = 0..n.
inline std::vector<std::vector<big>> trajectory(const affiter::Matrix& a, const std::vector<double>& x0,
                                                const std::vector<double>& b, std::size_t n)
{
    const std::size_t d = x0.size();
    std::vector<std::vector<big>> out;
    out.reserve(n + 1);
    std::vector<big> x(x0.begin(), x0.end());
    out.push_back(x);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<big> y(d);
        for (std::size_t i = 0; i < d; ++i) {
            big s = b[i];
            for (std::size_t j = 0; j < d; ++j) s += big(a(i, j)) * x[j];
            y[i] = s;
        }
        x = std::move(y);
        out.push_back(x);
    }
    return out;
}

inline affiter::Matrix random_matrix(std::size_t rows, std::size_t cols, affiter::Rng& rng, double lo = -1.0,
                                     double hi = 1.0)
{
    affiter::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

inline double orthogonality_residual(const affiter::Matrix& q)
{
    return (q.transpose() * q - affiter::Matrix::identity(q.cols())).norm_inf();
}

} // namespace testing
