#include "affiter/box.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace affiter {

Box point_box(std::span<const double> x)
{
    Box b;
    b.reserve(x.size());
    for (double v : x) b.emplace_back(v);
    return b;
}

Box centered_box(std::span<const double> center, std::span<const double> radius)
{
    if (center.size() != radius.size()) throw std::invalid_argument("centered_box: length mismatch");
    Box b;
    b.reserve(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
        if (!(radius[i] >= 0.0)) throw std::invalid_argument("centered_box: negative radius");
        b.emplace_back(rounding::sub_down(center[i], radius[i]), rounding::add_up(center[i], radius[i]));
    }
    return b;
}

Box operator+(const Box& a, const Box& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("Box sum: length mismatch");
    Box c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Box mat_vec(const Matrix& a, const Box& x)
{
    if (a.cols() != x.size()) throw std::invalid_argument("mat_vec: dimension mismatch");
    Box y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ai = a.row(i);
        Interval s;
        for (std::size_t j = 0; j < x.size(); ++j) s += scale(ai[j], x[j]);
        y[i] = s;
    }
    return y;
}

bool subset(const Box& a, const Box& b)
{
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!subset(a[i], b[i])) return false;
    return true;
}

bool contains(const Box& a, std::span<const double> p)
{
    if (a.size() != p.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!contains(a[i], p[i])) return false;
    return true;
}

BoxMetrics metrics(const Box& x)
{
    BoxMetrics m;
    m.mid.reserve(x.size());
    m.rad.reserve(x.size());
    m.wid.reserve(x.size());
    for (const auto& xi : x) {
        m.mid.push_back(xi.mid());
        m.rad.push_back(xi.rad());
        m.wid.push_back(xi.wid());
        m.bounded = m.bounded && xi.bounded();
    }
    return m;
}

double rad_inf(const Box& x) noexcept
{
    double r = 0.0;
    for (const auto& xi : x) r = std::max(r, xi.rad());
    return r;
}

double rad_2(const Box& x)
{
    Vector r;
    r.reserve(x.size());
    for (const auto& xi : x) r.push_back(xi.rad());
    return norm2(r);
}

IntervalMatrix::IntervalMatrix(std::size_t rows, std::size_t cols, Interval fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

IntervalMatrix::IntervalMatrix(const Matrix& m) : rows_(m.rows()), cols_(m.cols())
{
    data_.reserve(rows_ * cols_);
    for (double v : m.data()) data_.emplace_back(v);
}

Matrix IntervalMatrix::mid() const
{
    Matrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).mid();
    return m;
}

Matrix IntervalMatrix::mag() const
{
    Matrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            const auto& v = (*this)(i, j);
            m(i, j) = std::max(std::fabs(v.lo()), std::fabs(v.hi()));
        }
    return m;
}

bool IntervalMatrix::contains(const Matrix& m) const
{
    if (m.rows() != rows_ || m.cols() != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!affiter::contains((*this)(i, j), m(i, j))) return false;
    return true;
}

namespace {

/// g with |fl(a b) - a b| <= g (fl(|a| |b|) + n eta) + n eta for products
/// with inner dimension n, evaluated in round-to-nearest: the usual
/// gamma_n bound on both the product and the computed |a| |b|.
double product_error_factor(std::size_t n)
{
    using namespace rounding;
    constexpr double u = 0x1p-53;
    const double nu = mul_up(static_cast<double>(n), u);
    const double gamma = div_up(nu, sub_down(1.0, nu));
    return div_up(gamma, sub_down(1.0, gamma));
}

double underflow_term(std::size_t n)
{
    return rounding::mul_up(static_cast<double>(n), std::numeric_limits<double>::denorm_min());
}

} // namespace

IntervalMatrix enclose_product(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("enclose_product: shape mismatch");
    using namespace rounding;
    const Matrix c = a * b;
    const Matrix m = a.abs() * b.abs();
    const double g = product_error_factor(a.cols()), eta = underflow_term(a.cols());
    constexpr double inf = std::numeric_limits<double>::infinity();
    IntervalMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) {
            const double r = add_up(mul_up(g, add_up(m(i, j), eta)), eta);
            if (!std::isfinite(c(i, j)) || !std::isfinite(r))
                out(i, j) = make_unchecked(-inf, inf);
            else
                out(i, j) = make_unchecked(sub_down(c(i, j), r), add_up(c(i, j), r));
        }
    return out;
}

namespace {

/// Upper bound of p * q for entrywise nonnegative p and q.
Matrix product_up(const Matrix& p, const Matrix& q)
{
    using namespace rounding;
    Matrix c = p * q;
    const double g = add_up(1.0, product_error_factor(p.cols())), eta = underflow_term(p.cols());
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) c(i, j) = add_up(mul_up(g, add_up(c(i, j), eta)), eta);
    return c;
}

/// Midpoint and an upper bound of the radius, so that x is inside [m - r, m + r].
void split(const IntervalMatrix& x, Matrix& m, Matrix& r)
{
    using namespace rounding;
    m = Matrix(x.rows(), x.cols());
    r = Matrix(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const Interval& v = x(i, j);
            const double mid = v.mid();
            m(i, j) = mid;
            r(i, j) = std::max(sub_up(v.hi(), mid), sub_up(mid, v.lo()));
        }
}

bool bounded(const IntervalMatrix& x)
{
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (!x(i, j).bounded()) return false;
    return true;
}

} // namespace

IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("IntervalMatrix product: shape mismatch");
    if (!bounded(a) || !bounded(b)) {
        IntervalMatrix c(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const Interval& aik = a(i, k);
                if (aik.lo() == 0.0 && aik.hi() == 0.0) continue;
                for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    // Midpoint-radius form: the product of the midpoints, enclosed, widened
    // by |ma| rb + ra (|mb| + rb). At most 1.5 times wider than the endpoint
    // product and a few point products in cost.
    using namespace rounding;
    Matrix ma, ra, mb, rb;
    split(a, ma, ra);
    split(b, mb, rb);
    Matrix mag_b = mb.abs();
    for (std::size_t i = 0; i < mag_b.rows(); ++i)
        for (std::size_t j = 0; j < mag_b.cols(); ++j) mag_b(i, j) = add_up(mag_b(i, j), rb(i, j));
    const auto zero = [](const Matrix& m) { return std::all_of(m.data().begin(), m.data().end(), [](double v) { return v == 0.0; }); };
    const Matrix r1 = zero(rb) ? Matrix(ma.rows(), rb.cols()) : product_up(ma.abs(), rb);
    const Matrix r2 = zero(ra) ? Matrix(ra.rows(), mag_b.cols()) : product_up(ra, mag_b);
    IntervalMatrix c = enclose_product(ma, mb);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j) {
            const double r = add_up(r1(i, j), r2(i, j));
            c(i, j) = make_unchecked(sub_down(c(i, j).lo(), r), add_up(c(i, j).hi(), r));
        }
    return c;
}

IntervalMatrix operator*(const IntervalMatrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("IntervalMatrix product: shape mismatch");
    IntervalMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Interval& aik = a(i, k);
            const auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += scale(bk[j], aik);
        }
    return c;
}

Box operator*(const IntervalMatrix& a, const Box& x)
{
    if (a.cols() != x.size()) throw std::invalid_argument("IntervalMatrix-Box product: dimension mismatch");
    Box y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Interval s;
        for (std::size_t j = 0; j < x.size(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

} // namespace affiter
