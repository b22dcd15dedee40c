#pragma once

#include "affiter/matrix.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace affiter {

/// Per-iteration width bounds, one column per bound family, plus the constants
/// they were built from. Row k of every column is the bound for iteration k.
struct BoundReport {
    struct Column {
        std::string name;
        Vector values;
    };
    std::vector<std::pair<std::string, double>> constants;
    std::vector<std::pair<std::string, std::string>> notes;
    std::vector<Column> columns;

    /// Throws std::out_of_range for unknown names.
    [[nodiscard]] const Vector& column(std::string_view name) const;
    [[nodiscard]] double constant(std::string_view name) const;
    [[nodiscard]] std::size_t iterations() const noexcept
    {
        return columns.empty() ? 0 : columns.front().values.size();
    }
};

/// Bounds on ||wid(y_n)|| for y = B^-1 x, n = 0..n:
///   general_inf, general_2: (||B^-1|| ||A|| ||B||)^n ||wid y0|| + sum of powers * ||B^-1|| ||wid b||
///     with absolute-value matrices; every norm is an upper bound and the
///     recurrence is rounded upward, so these are rigorous.
///   orthogonal_inf, orthogonal_2: ||A||^n ||wid y0|| + sum ||A||^i ||wid b||, the
///     simplification for orthogonal B. ||A||_2 is a power-iteration estimate,
///     and the simplification assumes || |A| ||_2 = ||A||_2, so the 2-norm
///     column is not guaranteed to bound anything.
/// Throws NumericalError when B is singular, std::invalid_argument on shape mismatch.
BoundReport bound_general(const Matrix& a, const Matrix& b, std::span<const double> wid_y0,
                          std::span<const double> wid_b, std::size_t n);

/// Eigenvector bounds for the 2x2 toy problem from its analytic eigenpairs
/// 0.9 +- 0.3i (unit-norm eigenvectors):
///   eigen_2: (kappa_2(P) rho)^n ||wid x0||_2 + sum (kappa_2(P) rho)^i ||wid b||_2
///   nedialkov_jackson: kappa_2(P) rho^n w(x0) + (kappa_2(P) rho^(n-1) - 1) / (kappa_2(P) rho - 1) w(b),
///     without the trailing "+ b" of its usual statement, which is not a width.
BoundReport bound_toy_eigen(std::size_t n);

/// kappa_2 of the toy's eigenvector matrix.
double toy_eigenvector_condition();

} // namespace affiter
