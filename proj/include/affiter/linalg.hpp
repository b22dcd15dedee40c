#pragma once

#include "affiter/box.hpp"
#include "affiter/matrix.hpp"

#include <cstddef>

namespace affiter {

struct QRFactors {
    Matrix q;
    Matrix r;
};

struct SVDFactors {
    Matrix u;
    Matrix v;
    /// Descending, non-negative.
    Vector sigma;
};

/// Householder QR of a square finite matrix with Q accumulated explicitly.
/// Reflector signs avoid cancellation; entries of R below the diagonal are
/// exact zeros. Throws std::invalid_argument for non-square or non-finite input.
QRFactors qr(const Matrix& a);

/// One-sided Jacobi (Hestenes) SVD, A = U diag(sigma) V'.
/// Throws std::invalid_argument for non-square or non-finite input and
/// NumericalError when the sweep cap is reached.
SVDFactors svd(const Matrix& a);

struct PerronEstimate {
    double value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Dominant eigenvalue of a nonnegative matrix by power iteration from the
/// all-ones vector, to relative tolerance 1e-6 or 1e5 iterations.
/// Throws std::invalid_argument for negative or non-finite entries.
PerronEstimate perron_root(const Matrix& m);

struct RhoEstimate {
    double value = 0.0;
    /// |difference| between the last two Gelfand estimates.
    double agreement = 0.0;
    std::size_t squarings = 0;
};

/// Spectral radius by the Gelfand formula on repeated normalized squarings,
/// rho ~ ||A^(2^m)||_2^(1/2^m), stopping after 40 squarings or when two
/// successive estimates agree within 1e-4.
RhoEstimate rho_estimate(const Matrix& a);

/// Largest singular value by power iteration on M'M.
double norm2_estimate(const Matrix& m);

/// Upper bound of ||M||_2 <= || |M| ||_2: the Collatz-Wielandt bound of |M|'|M|
/// at the power-iteration vector, capped by sqrt(||M||_1 ||M||_inf), with a
/// margin for the rounding of its own evaluation.
double norm2_upper(const Matrix& m);

/// A^k in round-to-nearest (binary powering). Throws NumericalError on overflow.
Matrix mat_power(const Matrix& a, std::size_t k);

/// Gaussian elimination with partial pivoting. Throws NumericalError when singular.
Matrix inverse(const Matrix& a);

/// Interval matrix G containing the exact inverse of a nearly orthogonal Q:
/// G = Q' + [-delta, delta] with eta >= ||I - Q'Q||_inf (rigorous) and
/// delta = eta ||Q'||_inf / (1 - eta). Throws NumericalError when eta >= 1.
IntervalMatrix enclose_inverse_near_orthogonal(const Matrix& q);

} // namespace affiter
