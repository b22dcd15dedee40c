#include "affiter/affine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace affiter {

using rounding::add_up;
using rounding::mul_up;

std::size_t AffineForm::term_count() const noexcept
{
    return static_cast<std::size_t>(std::count_if(coeffs.begin(), coeffs.end(), [](double c) { return c != 0.0; }));
}

AffineVector aff_from_box(const Box& x, std::size_t first_symbol)
{
    AffineVector out;
    out.forms.resize(x.size());
    out.next_symbol = first_symbol + x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Interval& xi = x[i];
        if (!xi.bounded()) throw std::invalid_argument("aff_from_box: unbounded component");
        AffineForm& f = out.forms[i];
        f.center = xi.mid();
        const double coeff = xi.rad();
        const double reach = std::max(rounding::sub_up(f.center, xi.lo()), rounding::sub_up(xi.hi(), f.center));
        f.err = reach > coeff ? rounding::sub_up(reach, coeff) : 0.0;
        if (coeff != 0.0) {
            f.coeffs.assign(first_symbol + i + 1, 0.0);
            f.coeffs[first_symbol + i] = coeff;
        }
    }
    return out;
}

AffinePair aff_lift(const Box& x0, const Box& b)
{
    AffinePair p{aff_from_box(x0, 0), aff_from_box(b, x0.size())};
    p.x.next_symbol = p.b.next_symbol;
    return p;
}

namespace {

AffineVector promote_from(const AffineVector& x, std::size_t first)
{
    AffineVector out = x;
    std::size_t next = std::max(first, x.next_symbol);
    for (auto& f : out.forms) {
        if (f.err == 0.0) continue;
        f.coeffs.resize(next + 1, 0.0);
        f.coeffs[next] = f.err;
        f.err = 0.0;
        ++next;
    }
    out.next_symbol = next;
    return out;
}

} // namespace

AffineVector aff_promote_errors(const AffineVector& x)
{
    return promote_from(x, x.next_symbol);
}

AffineVector aff_mat_vec_add(const Matrix& a, const AffineVector& x_in, const AffineVector& b, ErrorPolicy policy)
{
    const std::size_t d = x_in.size();
    if (a.rows() != b.size() || a.cols() != d) throw std::invalid_argument("aff_mat_vec_add: dimension mismatch");

    const AffineVector x = policy == ErrorPolicy::promote
                               ? promote_from(x_in, std::max(x_in.next_symbol, b.next_symbol))
                               : x_in;
    const std::size_t symbols = std::max(x.next_symbol, b.next_symbol);

    // Upper bounds of |center| + sum |coeffs| per input form.
    Vector mag_x(d);
    for (std::size_t j = 0; j < d; ++j) {
        double s = std::fabs(x.forms[j].center);
        for (double c : x.forms[j].coeffs) s = add_up(s, std::fabs(c));
        mag_x[j] = s;
    }

    // A recursively summed dot product of m = d + 1 terms errs by at most
    // gamma_m * sum |terms|, gamma_m = m u / (1 - m u).
    constexpr double unit_roundoff = 0x1p-53;
    const double mu = static_cast<double>(d + 1) * unit_roundoff;
    const double gamma = rounding::div_up(mu, rounding::sub_down(1.0, mu));
    constexpr double tiny = std::numeric_limits<double>::denorm_min();

    AffineVector out;
    out.next_symbol = symbols;
    out.forms.resize(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto ai = a.row(i);
        const AffineForm& bi = b.forms[i];
        AffineForm& f = out.forms[i];

        double center = 0.0;
        std::size_t width = bi.coeffs.size();
        for (std::size_t j = 0; j < d; ++j) {
            center += ai[j] * x.forms[j].center;
            if (ai[j] != 0.0) width = std::max(width, x.forms[j].coeffs.size());
        }
        f.center = center + bi.center;

        f.coeffs.assign(width, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            const double aij = ai[j];
            if (aij == 0.0) continue;
            const auto& cj = x.forms[j].coeffs;
            for (std::size_t s = 0; s < cj.size(); ++s) f.coeffs[s] += aij * cj[s];
        }
        for (std::size_t s = 0; s < bi.coeffs.size(); ++s) f.coeffs[s] += bi.coeffs[s];

        double mag_b = std::fabs(bi.center);
        for (double c : bi.coeffs) mag_b = add_up(mag_b, std::fabs(c));
        double bound = mag_b;
        double err_prop = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            bound = add_up(bound, mul_up(std::fabs(ai[j]), mag_x[j]));
            if (x.forms[j].err != 0.0) err_prop = add_up(err_prop, mul_up(std::fabs(ai[j]), x.forms[j].err));
        }
        const double products = static_cast<double>((d + 1) * (width + 1));
        double err = add_up(mul_up(gamma, bound), mul_up(products, tiny));
        err = add_up(err, err_prop);
        err = add_up(err, bi.err);
        f.err = err;

        while (!f.coeffs.empty() && f.coeffs.back() == 0.0) f.coeffs.pop_back();
    }
    return out;
}

Box aff_to_box(const AffineVector& x)
{
    Box out;
    out.reserve(x.size());
    for (const auto& f : x.forms) {
        double r = f.err;
        for (double c : f.coeffs) r = add_up(r, std::fabs(c));
        out.push_back(make_unchecked(rounding::sub_down(f.center, r), add_up(f.center, r)));
    }
    return out;
}

AffineVector aff_condense(const AffineVector& x, std::size_t keep)
{
    AffineVector out = x;
    if (keep == keep_all) return out;
    std::vector<std::size_t> idx;
    for (auto& f : out.forms) {
        idx.clear();
        for (std::size_t s = 0; s < f.coeffs.size(); ++s)
            if (f.coeffs[s] != 0.0) idx.push_back(s);
        if (idx.size() <= keep) continue;
        std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(),
                         [&](std::size_t p, std::size_t q) {
                             const double ap = std::fabs(f.coeffs[p]), aq = std::fabs(f.coeffs[q]);
                             return ap != aq ? ap > aq : p < q;
                         });
        for (auto it = idx.begin() + static_cast<std::ptrdiff_t>(keep); it != idx.end(); ++it) {
            f.err = add_up(f.err, std::fabs(f.coeffs[*it]));
            f.coeffs[*it] = 0.0;
        }
        while (!f.coeffs.empty() && f.coeffs.back() == 0.0) f.coeffs.pop_back();
    }
    return out;
}

std::size_t aff_active_symbols(const AffineVector& x)
{
    std::vector<bool> used(x.next_symbol, false);
    for (const auto& f : x.forms)
        for (std::size_t s = 0; s < f.coeffs.size(); ++s)
            if (f.coeffs[s] != 0.0) used[s] = true;
    return static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
}

} // namespace affiter
