#include "affiter/bounds.hpp"

#include "affiter/generator.hpp"
#include "affiter/interval.hpp"
#include "affiter/linalg.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace affiter {

using rounding::add_up;
using rounding::mul_up;

namespace {

double norm_inf_up(const Matrix& m)
{
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (double v : m.row(i)) s = add_up(s, std::fabs(v));
        best = std::max(best, s);
    }
    return best;
}

double norm_inf_up(std::span<const double> x)
{
    double best = 0.0;
    for (double v : x) best = std::max(best, std::fabs(v));
    return best;
}

double norm2_up(std::span<const double> x)
{
    const double scale = norm_inf_up(x);
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double v : x) {
        const double t = rounding::div_up(std::fabs(v), scale);
        s = add_up(s, mul_up(t, t));
    }
    return mul_up(rounding::sqrt_up(s), scale);
}

/// w_0 = w0, w_{k+1} = q w_k + c, rounded upward.
Vector unroll(double q, double w0, double c, std::size_t n)
{
    Vector w(n + 1);
    w[0] = w0;
    for (std::size_t k = 1; k <= n; ++k) w[k] = add_up(mul_up(q, w[k - 1]), c);
    return w;
}

} // namespace

const Vector& BoundReport::column(std::string_view name) const
{
    for (const auto& c : columns)
        if (c.name == name) return c.values;
    throw std::out_of_range("BoundReport: no column " + std::string(name));
}

double BoundReport::constant(std::string_view name) const
{
    for (const auto& [key, value] : constants)
        if (key == name) return value;
    throw std::out_of_range("BoundReport: no constant " + std::string(name));
}

BoundReport bound_general(const Matrix& a, const Matrix& b, std::span<const double> wid_y0,
                          std::span<const double> wid_b, std::size_t n)
{
    const std::size_t d = a.rows();
    if (!a.square() || b.rows() != d || !b.square() || wid_y0.size() != d || wid_b.size() != d)
        throw std::invalid_argument("bound_general: dimension mismatch");
    const Matrix binv = inverse(b);

    const double binv_inf = norm_inf_up(binv), a_inf = norm_inf_up(a), b_inf = norm_inf_up(b);
    const double binv_2 = norm2_upper(binv), a_abs_2 = norm2_upper(a), b_2 = norm2_upper(b);
    const double a_2 = norm2_estimate(a);
    const double y0_inf = norm_inf_up(wid_y0), y0_2 = norm2_up(wid_y0);
    const double wb_inf = norm_inf_up(wid_b), wb_2 = norm2_up(wid_b);

    const double q_inf = mul_up(mul_up(binv_inf, a_inf), b_inf);
    const double q_2 = mul_up(mul_up(binv_2, a_abs_2), b_2);

    BoundReport r;
    r.constants = {
        {"norm_abs_binv_inf", binv_inf}, {"norm_abs_a_inf", a_inf},   {"norm_abs_b_inf", b_inf},
        {"kappa_inf", mul_up(binv_inf, b_inf)},
        {"norm_abs_binv_2", binv_2},     {"norm_abs_a_2", a_abs_2},   {"norm_abs_b_2", b_2},
        {"kappa_2", mul_up(binv_2, b_2)}, {"norm_a_2", a_2},
        {"wid_y0_inf", y0_inf},          {"wid_y0_2", y0_2},          {"wid_b_inf", wb_inf},
        {"wid_b_2", wb_2},
    };
    r.columns = {
        {"general_inf", unroll(q_inf, y0_inf, mul_up(binv_inf, wb_inf), n)},
        {"general_2", unroll(q_2, y0_2, mul_up(binv_2, wb_2), n)},
        {"orthogonal_inf", unroll(a_inf, y0_inf, wb_inf, n)},
        {"orthogonal_2", unroll(a_2, y0_2, wb_2, n)},
    };
    return r;
}

double toy_eigenvector_condition()
{
    // Unit-norm eigenvectors (1, lambda) / sqrt(1 + |lambda|^2) of the toy
    // matrix for lambda = 0.9 +- 0.3i. kappa_2 is the square root of the
    // eigenvalue ratio of the 2x2 Hermitian Gram matrix.
    const std::complex<double> lambda(0.9, 0.3);
    const double norm_sq = 1.0 + std::norm(lambda);
    const std::complex<double> cross = (1.0 + std::conj(lambda) * std::conj(lambda)) / norm_sq;
    const double hi = 1.0 + std::abs(cross);
    const double lo = 1.0 - std::abs(cross);
    return std::sqrt(hi / lo);
}

BoundReport bound_toy_eigen(std::size_t n)
{
    const double rho = std::sqrt(0.9);
    const double kappa = toy_eigenvector_condition();
    const double q = kappa * rho;

    const IterationProblem toy = toy_problem(0);
    const BoxMetrics mx = metrics(toy.x0);
    const BoxMetrics mb = metrics(toy.b);
    const double w0 = norm2_up(mx.wid);
    const double wb = norm2_up(mb.wid);

    Vector nj(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double e = static_cast<double>(k);
        nj[k] = kappa * std::pow(rho, e) * w0 + (kappa * std::pow(rho, e - 1.0) - 1.0) / (q - 1.0) * wb;
    }

    BoundReport r;
    r.constants = {{"rho", rho}, {"kappa_2_p", kappa}, {"kappa_rho", q}, {"wid_x0_2", w0}, {"wid_b_2", wb}};
    r.notes = {{"eigen_2", q > 1.0 ? "grows (kappa_2(P) rho > 1)" : "decays (kappa_2(P) rho < 1)"},
               {"nedialkov_jackson", "trailing +b term omitted"}};
    r.columns = {{"eigen_2", unroll(q, w0, wb, n)}, {"nedialkov_jackson", std::move(nj)}};
    return r;
}

} // namespace affiter
