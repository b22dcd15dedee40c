#include "affiter/generator.hpp"

#include "affiter/error.hpp"
#include "affiter/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace affiter {

std::string_view to_string(Level l) noexcept
{
    return l == Level::well ? "well" : "ill";
}

std::optional<Level> parse_level(std::string_view name) noexcept
{
    if (name == "well") return Level::well;
    if (name == "ill") return Level::ill;
    return std::nullopt;
}

std::string to_string(MatrixClass c)
{
    return std::string(to_string(c.cond)) + "/" + std::string(to_string(c.scale));
}

Matrix random_orthogonal(std::size_t d, Rng& rng)
{
    if (d == 0) throw std::invalid_argument("random_orthogonal: d must be positive");
    Matrix g(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) g(i, j) = rng.normal();
    QRFactors f = qr(g);
    for (std::size_t j = 0; j < d; ++j) {
        if (f.r(j, j) >= 0.0) continue;
        for (std::size_t i = 0; i < d; ++i) f.q(i, j) = -f.q(i, j);
    }
    return f.q;
}

GeneratedMatrix certify(const Matrix& a)
{
    GeneratedMatrix g;
    g.a = a;
    g.scaling.assign(a.rows(), 1.0);
    g.rho = rho_estimate(a).value;
    g.perron = perron_root(a.abs()).value;
    return g;
}

GeneratedMatrix tune_matrix(const Matrix& m, Vector scaling)
{
    if (!m.square() || m.empty()) throw std::invalid_argument("tune_matrix: M must be square");
    const std::size_t d = m.rows();
    for (int step = 0; step <= 20; ++step) {
        const double s = step / 10.0;
        Matrix shifted = m;
        for (std::size_t i = 0; i < d; ++i) shifted(i, i) += s;
        const double r = rho_estimate(shifted).value;
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        const double c = target_rho / r;
        GeneratedMatrix g = certify(c * shifted);
        if (g.rho <= accept_rho && g.perron >= accept_perron) {
            g.scaling = std::move(scaling);
            g.shift = s;
            g.factor = c;
            return g;
        }
    }
    throw NumericalError("gen_matrix: no shift s in [0, 2] gives rho(A) <= 0.97 and rho(|A|) >= 1.1; "
                         "configuration out of regime");
}

GeneratedMatrix gen_matrix(std::size_t d, MatrixClass cls, std::uint64_t seed)
{
    if (d < 2) throw std::invalid_argument("gen_matrix: dimension must be at least 2");
    Rng left(seed, RngStream::left_factor);
    Rng right(seed, RngStream::right_factor);
    const Matrix u = random_orthogonal(d, left);
    const Matrix v = random_orthogonal(d, right);

    const double cond = cls.cond == Level::well ? 1e2 : 1e10;
    Vector sigma(d);
    for (std::size_t i = 0; i < d; ++i)
        sigma[i] = std::pow(cond, -static_cast<double>(i) / static_cast<double>(d - 1));
    Matrix m = u * Matrix::diagonal(sigma) * v.transpose();

    Vector scaling(d, 1.0);
    if (cls.scale == Level::ill) {
        Rng rng(seed, RngStream::scaling);
        for (double& x : scaling) x = std::pow(10.0, 10.0 * rng.uniform());
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) m(i, j) = m(i, j) * scaling[i] / scaling[j];
    }
    return tune_matrix(m, std::move(scaling));
}

double condition_estimate(const Matrix& a)
{
    const SVDFactors f = svd(a);
    const double lo = f.sigma.back();
    return lo > 0.0 ? f.sigma.front() / lo : std::numeric_limits<double>::infinity();
}

Matrix toy_matrix()
{
    return Matrix{{0.0, 1.0}, {-0.9, 1.8}};
}

IterationProblem toy_problem(std::size_t n, Rigor rigor)
{
    const double c = 4.7e-2 * 3.0;
    return IterationProblem{
        .a = toy_matrix(),
        .b = {Interval(0.0), scale(c, Interval(9.95, 10.05))},
        .x0 = {Interval(0.0), Interval(1.0, 1.1)},
        .n = n,
        .rigor = rigor,
    };
}

IterationProblem make_problem(const GeneratedMatrix& g, std::size_t n, Rigor rigor, double x0_radius,
                              double b_radius)
{
    if (!(x0_radius >= 0.0) || !(b_radius >= 0.0) || !std::isfinite(x0_radius) || !std::isfinite(b_radius))
        throw std::invalid_argument("make_problem: radii must be finite and non-negative");
    const std::size_t d = g.a.rows();
    const double dmax = *std::max_element(g.scaling.begin(), g.scaling.end());
    Vector r0(d), rb(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double w = g.scaling[j] / dmax;
        r0[j] = x0_radius * w;
        rb[j] = b_radius * w;
    }
    const Vector zero(d, 0.0);
    return IterationProblem{
        .a = g.a,
        .b = centered_box(zero, rb),
        .x0 = centered_box(zero, r0),
        .n = n,
        .rigor = rigor,
    };
}

} // namespace affiter
