#pragma once

#include "affiter/box.hpp"
#include "affiter/matrix.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace affiter {

/// center + sum_s coeffs[s] * eps_s + e, with eps_s in [-1, 1] and |e| <= err.
///
/// Coefficients are stored densely by symbol id; ids beyond coeffs.size()
/// have coefficient zero.
struct AffineForm {
    double center = 0.0;
    std::vector<double> coeffs;
    double err = 0.0;

    [[nodiscard]] double coeff(std::size_t symbol) const noexcept
    {
        return symbol < coeffs.size() ? coeffs[symbol] : 0.0;
    }
    /// Number of nonzero coefficients.
    [[nodiscard]] std::size_t term_count() const noexcept;
};

/// Affine forms over one shared symbol space.
struct AffineVector {
    std::vector<AffineForm> forms;
    /// Every symbol id used by the forms is below this counter.
    std::size_t next_symbol = 0;

    [[nodiscard]] std::size_t size() const noexcept { return forms.size(); }
};

/// Where the rounding error of an affine step is kept.
enum class ErrorPolicy {
    /// Pending err terms become fresh symbols before each step, so they are
    /// propagated exactly through A. Symbol count grows by at most d per step.
    promote,
    /// err is a per-component scalar propagated as |A| err. Symbol count stays
    /// constant, at the price of err growing like the Perron root of |A|.
    accumulate,
};

/// Component i becomes mid(x_i) + rad(x_i) * eps_fresh; the midpoint slack
/// goes into err. Symbols are allocated starting at first_symbol.
/// Throws std::invalid_argument for an unbounded box.
AffineVector aff_from_box(const Box& x, std::size_t first_symbol = 0);

/// Lift x0 and b into one symbol space: x0 takes ids [0, d), b takes [d, 2d).
struct AffinePair {
    AffineVector x;
    AffineVector b;
};
AffinePair aff_lift(const Box& x0, const Box& b);

/// A x + b. Coefficients and centers are round-to-nearest evaluations of the
/// exact linear maps; a rigorous bound of the rounding error is returned in
/// err, together with |A| err_in under ErrorPolicy::accumulate. b's err is
/// charged as an independent deviation each step.
/// Throws std::invalid_argument on dimension mismatch.
AffineVector aff_mat_vec_add(const Matrix& a, const AffineVector& x, const AffineVector& b,
                             ErrorPolicy policy = ErrorPolicy::promote);

/// Replace every nonzero err by a fresh symbol carrying it. Exact.
AffineVector aff_promote_errors(const AffineVector& x);

/// Component i = center_i +- (sum |coeffs| + err), rounded outward.
Box aff_to_box(const AffineVector& x);

inline constexpr std::size_t keep_all = std::numeric_limits<std::size_t>::max();

/// Keep the `keep` largest-magnitude coefficients per form and fold the rest
/// into err (rounded up). The represented set only grows.
AffineVector aff_condense(const AffineVector& x, std::size_t keep);

/// Number of symbols carrying a nonzero coefficient in some form.
std::size_t aff_active_symbols(const AffineVector& x);

} // namespace affiter
