#include "affiter/linalg.hpp"

#include "affiter/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace affiter {

namespace {

void require_square_finite(const Matrix& a, const char* who)
{
    if (!a.square()) throw std::invalid_argument(std::string(who) + ": matrix must be square");
    if (!a.all_finite()) throw std::invalid_argument(std::string(who) + ": matrix must be finite");
}

double dot(std::span<const double> x, std::span<const double> y) noexcept
{
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

} // namespace

QRFactors qr(const Matrix& a)
{
    require_square_finite(a, "qr");
    const std::size_t n = a.rows();
    Matrix r = a;
    Matrix q = Matrix::identity(n);
    Vector v(n);

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const std::size_t m = n - k;
        for (std::size_t i = 0; i < m; ++i) v[i] = r(k + i, k);
        const double norm = norm2(std::span<const double>(v.data(), m));
        if (norm == 0.0) continue;
        const double alpha = v[0] >= 0.0 ? -norm : norm;
        v[0] -= alpha;
        const double vv = dot({v.data(), m}, {v.data(), m});
        if (vv == 0.0) continue;
        const double beta = 2.0 / vv;

        for (std::size_t j = k + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += v[i] * r(k + i, j);
            s *= beta;
            for (std::size_t i = 0; i < m; ++i) r(k + i, j) -= s * v[i];
        }
        r(k, k) = alpha;
        for (std::size_t i = 1; i < m; ++i) r(k + i, k) = 0.0;

        // Q <- Q H_k
        for (std::size_t i = 0; i < n; ++i) {
            auto qi = q.row(i);
            double s = 0.0;
            for (std::size_t t = 0; t < m; ++t) s += qi[k + t] * v[t];
            s *= beta;
            for (std::size_t t = 0; t < m; ++t) qi[k + t] -= s * v[t];
        }
    }
    return {std::move(q), std::move(r)};
}

SVDFactors svd(const Matrix& a)
{
    require_square_finite(a, "svd");
    const std::size_t n = a.rows();
    constexpr std::size_t max_sweeps = 80;
    const double tol = static_cast<double>(std::max<std::size_t>(n, 1)) * std::numeric_limits<double>::epsilon();

    // Rows of w and vt hold the columns of W = A V and of V.
    Matrix w = a.transpose();
    Matrix vt = Matrix::identity(n);

    auto rotate = [n](std::span<double> p, std::span<double> q, double c, double s) {
        for (std::size_t k = 0; k < n; ++k) {
            const double tp = p[k];
            const double tq = q[k];
            p[k] = c * tp - s * tq;
            q[k] = s * tp + c * tq;
        }
    };

    bool converged = n < 2;
    std::size_t sweep = 0;
    double worst = 0.0;
    for (; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        worst = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = dot(w.row(p), w.row(p));
                const double beta = dot(w.row(q), w.row(q));
                const double gamma = dot(w.row(p), w.row(q));
                if (gamma == 0.0 || alpha == 0.0 || beta == 0.0) continue;
                const double rel = std::fabs(gamma) / std::sqrt(alpha) / std::sqrt(beta);
                worst = std::max(worst, rel);
                if (rel <= tol) continue;
                converged = false;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::fabs(zeta) > 1e150
                                     ? 0.5 / zeta
                                     : std::copysign(1.0, zeta) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate(w.row(p), w.row(q), c, s);
                rotate(vt.row(p), vt.row(q), c, s);
            }
        }
    }
    if (!converged)
        throw NumericalError("svd: one-sided Jacobi did not converge after " + std::to_string(sweep) +
                             " sweeps (largest relative column coupling " + std::to_string(worst) + ")");

    Vector sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(w.row(j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SVDFactors out{Matrix(n, n), Matrix(n, n), Vector(n)};
    std::vector<bool> filled(n, false);
    for (std::size_t jj = 0; jj < n; ++jj) {
        const std::size_t j = order[jj];
        out.sigma[jj] = sigma[j];
        for (std::size_t i = 0; i < n; ++i) out.v(i, jj) = vt(j, i);
        if (sigma[j] > 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.u(i, jj) = w(j, i) / sigma[j];
            filled[jj] = true;
        }
    }

    // Complete U for a rank-deficient A with unit vectors orthogonalized
    // (twice) against the columns already present.
    std::size_t next_unit = 0;
    for (std::size_t jj = 0; jj < n; ++jj) {
        if (filled[jj]) continue;
        for (; next_unit < n; ++next_unit) {
            Vector e(n, 0.0);
            e[next_unit] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t c = 0; c < n; ++c) {
                    if (!filled[c]) continue;
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) s += out.u(i, c) * e[i];
                    for (std::size_t i = 0; i < n; ++i) e[i] -= s * out.u(i, c);
                }
            const double nrm = norm2(e);
            if (nrm > 0.5) {
                for (std::size_t i = 0; i < n; ++i) out.u(i, jj) = e[i] / nrm;
                filled[jj] = true;
                ++next_unit;
                break;
            }
        }
        if (!filled[jj]) throw NumericalError("svd: could not complete the left singular basis");
    }
    return out;
}

PerronEstimate perron_root(const Matrix& m)
{
    if (!m.square()) throw std::invalid_argument("perron_root: matrix must be square");
    for (double v : m.data())
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("perron_root: matrix must be nonnegative and finite");
    const std::size_t n = m.rows();
    if (n == 0) return {0.0, true, 0};

    constexpr double tol = 1e-6;
    constexpr std::size_t cap = 100000;

    // The shifted pass (M + I) makes the Perron root strictly dominant
    // for periodic matrices where the plain iteration oscillates.
    auto run = [&](double shift, std::size_t budget, std::size_t& used) -> PerronEstimate {
        Vector x(n, 1.0), y(n);
        double prev = std::numeric_limits<double>::quiet_NaN();
        double prev_delta = std::numeric_limits<double>::quiet_NaN();
        PerronEstimate best{};
        for (std::size_t it = 1; it <= budget; ++it, ++used) {
            for (std::size_t i = 0; i < n; ++i) y[i] = dot(m.row(i), x) + shift * x[i];
            const double lam = norm_inf(y);
            if (lam == 0.0) return {0.0, true, used + 1};

            // Collatz-Wielandt bracket, valid whenever x > 0.
            bool positive = true;
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(x[i] > 0.0)) {
                    positive = false;
                    break;
                }
                const double ratio = y[i] / x[i];
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / lam;

            const double value = lam - shift;
            best = {value, false, used + 1};
            if (positive && hi - lo <= tol * (hi - shift)) return {0.5 * (lo + hi) - shift, true, used + 1};

            const double delta = std::fabs(lam - prev);
            if (delta == 0.0) return {value, true, used + 1};
            if (delta <= tol * value && std::isfinite(prev_delta)) {
                const double ratio = delta / prev_delta;
                if (ratio < 1.0 && delta * ratio / (1.0 - ratio) <= tol * value) return {value, true, used + 1};
            }
            prev_delta = delta;
            prev = lam;
        }
        return best;
    };

    std::size_t used = 0;
    PerronEstimate plain = run(0.0, cap / 2, used);
    if (plain.converged) return plain;
    PerronEstimate shifted = run(1.0, cap - cap / 2, used);
    shifted.iterations = used;
    return shifted;
}

double norm2_estimate(const Matrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0.0;
    const double scale = m.max_abs();
    if (scale == 0.0) return 0.0;

    Vector x(cols, 1.0 / std::sqrt(static_cast<double>(cols)));
    Vector y(rows), z(cols);
    double sigma = 0.0;
    bool restarted = false;
    for (int it = 0; it < 2000; ++it) {
        for (std::size_t i = 0; i < rows; ++i) y[i] = dot(m.row(i), x) / scale;
        const double s = norm2(y);
        if (s == 0.0) {
            if (restarted) return 0.0;
            // All-ones start is in the kernel; restart on the heaviest column.
            std::size_t jmax = 0;
            double best = -1.0;
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    if (std::fabs(m(i, j)) > best) best = std::fabs(m(i, j)), jmax = j;
            std::fill(x.begin(), x.end(), 0.0);
            x[jmax] = 1.0;
            restarted = true;
            continue;
        }
        std::fill(z.begin(), z.end(), 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            const auto mi = m.row(i);
            for (std::size_t j = 0; j < cols; ++j) z[j] += mi[j] * y[i] / scale;
        }
        const double zn = norm2(z);
        if (zn == 0.0) return s * scale;
        for (std::size_t j = 0; j < cols; ++j) x[j] = z[j] / zn;
        if (std::fabs(s - sigma) <= 1e-13 * s) return s * scale;
        sigma = s;
    }
    return sigma * scale;
}

double norm2_upper(const Matrix& m)
{
    if (!m.all_finite()) throw std::invalid_argument("norm2_upper: non-finite input");
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0.0;
    const Matrix a = m.abs();
    const double scale = a.max_abs();
    if (scale == 0.0) return 0.0;

    double norm1 = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += a(i, j);
        norm1 = std::max(norm1, s);
    }
    const double cap = std::sqrt(norm1 / scale) * std::sqrt(a.norm_inf() / scale);

    // S = |M|'|M| / scale^2 is symmetric nonnegative, so max_i (S v)_i / v_i
    // bounds its Perron root from above for every positive v.
    Vector v(cols, 1.0), y(rows), z(cols);
    const auto apply = [&] {
        for (std::size_t i = 0; i < rows; ++i) y[i] = dot(a.row(i), v) / scale;
        std::fill(z.begin(), z.end(), 0.0);
        for (std::size_t i = 0; i < rows; ++i) {
            const auto ai = a.row(i);
            for (std::size_t j = 0; j < cols; ++j) z[j] += ai[j] / scale * y[i];
        }
    };
    double best = cap * cap;
    for (int it = 0; it < 500; ++it) {
        apply();
        double upper = 0.0;
        for (std::size_t j = 0; j < cols; ++j) upper = std::max(upper, z[j] / v[j]);
        best = std::min(best, upper);
        const double zn = norm_inf(z);
        if (zn == 0.0) break;
        double lower = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cols; ++j) lower = std::min(lower, z[j] / v[j]);
        if (upper - lower <= 1e-14 * upper) break;
        // Keep v strictly positive so the quotient stays defined.
        for (std::size_t j = 0; j < cols; ++j) v[j] = std::max(z[j] / zn, 1e-150);
    }
    const double margin = 1.0 + 4.0 * static_cast<double>(rows + cols + 4) * 0x1p-53;
    return std::sqrt(best) * scale * margin;
}

RhoEstimate rho_estimate(const Matrix& a)
{
    require_square_finite(a, "rho_estimate");
    if (a.rows() == 0) return {};
    constexpr std::size_t max_squarings = 40;
    constexpr double agree_tol = 1e-4;

    // Invariant: A^power = exp(log_scale) * b.
    Matrix b = a;
    double log_scale = 0.0;
    double power = 1.0;
    auto normalize = [&]() -> bool {
        const double mx = b.max_abs();
        if (mx == 0.0) return false;
        b = (1.0 / mx) * b;
        log_scale += std::log(mx);
        return true;
    };
    if (!normalize()) return {0.0, 0.0, 0};
    double prev = std::exp(std::log(norm2_estimate(b)) + log_scale);

    RhoEstimate est{prev, std::numeric_limits<double>::infinity(), 0};
    for (std::size_t m = 1; m <= max_squarings; ++m) {
        b = b * b;
        log_scale *= 2.0;
        power *= 2.0;
        est.squarings = m;
        if (!normalize()) return {0.0, prev, m};
        const double nb = norm2_estimate(b);
        if (nb == 0.0) return {0.0, prev, m};
        const double value = std::exp((std::log(nb) + log_scale) / power);
        est.value = value;
        est.agreement = std::fabs(value - prev);
        if (est.agreement <= agree_tol) break;
        prev = value;
    }
    return est;
}

Matrix mat_power(const Matrix& a, std::size_t k)
{
    if (!a.square()) throw std::invalid_argument("mat_power: matrix must be square");
    Matrix result = Matrix::identity(a.rows());
    Matrix base = a;
    bool first = true;
    while (k > 0) {
        if (k & 1U) {
            result = first ? base : result * base;
            first = false;
            if (!result.all_finite()) throw NumericalError("mat_power: overflow");
        }
        k >>= 1U;
        if (k > 0) {
            base = base * base;
            if (!base.all_finite()) throw NumericalError("mat_power: overflow");
        }
    }
    return result;
}

Matrix inverse(const Matrix& a)
{
    require_square_finite(a, "inverse");
    const std::size_t n = a.rows();
    Matrix lu = a;
    Matrix inv = Matrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(lu(i, k)) > std::fabs(lu(piv, k))) piv = i;
        if (lu(piv, k) == 0.0) throw NumericalError("inverse: matrix is singular");
        if (piv != k) {
            std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(piv).begin());
            std::swap_ranges(inv.row(k).begin(), inv.row(k).end(), inv.row(piv).begin());
        }
        const double d = lu(k, k);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = lu(i, k) / d;
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                lu(i, j) -= f * lu(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            lu(k, j) /= d;
            inv(k, j) /= d;
        }
    }
    if (!inv.all_finite()) throw NumericalError("inverse: matrix is numerically singular");
    return inv;
}

IntervalMatrix enclose_inverse_near_orthogonal(const Matrix& q)
{
    require_square_finite(q, "enclose_inverse_near_orthogonal");
    using namespace rounding;
    const std::size_t n = q.rows();
    const Matrix qt = q.transpose();
    const IntervalMatrix gram = enclose_product(qt, q);

    double eta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Interval e = Interval(i == j ? 1.0 : 0.0) - gram(i, j);
            row = add_up(row, std::max(std::fabs(e.lo()), std::fabs(e.hi())));
        }
        eta = std::max(eta, row);
    }
    if (!(eta < 1.0))
        throw NumericalError("enclose_inverse_near_orthogonal: ||I - Q'Q||_inf = " + std::to_string(eta) +
                             " >= 1, matrix too far from orthogonal");

    double norm_qt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (double v : qt.row(i)) row = add_up(row, std::fabs(v));
        norm_qt = std::max(norm_qt, row);
    }
    const double delta = eta == 0.0 ? 0.0 : div_up(mul_up(eta, norm_qt), sub_down(1.0, eta));

    IntervalMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = Interval(sub_down(qt(i, j), delta), add_up(qt(i, j), delta));
    return g;
}

} // namespace affiter
