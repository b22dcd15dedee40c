#pragma once

#include "affiter/interval.hpp"
#include "affiter/matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace affiter {

/// Interval vector.
using Box = std::vector<Interval>;

/// Box of degenerate intervals.
Box point_box(std::span<const double> x);
/// Componentwise [c - r, c + r], outward rounded.
Box centered_box(std::span<const double> center, std::span<const double> radius);

/// Componentwise sum. Throws std::invalid_argument on length mismatch.
Box operator+(const Box& a, const Box& b);

/// Point matrix times interval vector: component i is the interval sum of
/// scale(A(i, j), x[j]). Throws std::invalid_argument on dimension mismatch.
Box mat_vec(const Matrix& a, const Box& x);

[[nodiscard]] bool subset(const Box& a, const Box& b);
[[nodiscard]] bool contains(const Box& a, std::span<const double> p);

struct BoxMetrics {
    Vector mid;
    Vector rad;
    Vector wid;
    /// False when some component is unbounded; rad/wid are then +inf there.
    bool bounded = true;
};

BoxMetrics metrics(const Box& x);
/// Largest component radius.
double rad_inf(const Box& x) noexcept;
/// Euclidean norm of the radius vector.
double rad_2(const Box& x);

/// Dense interval matrix.
class IntervalMatrix {
public:
    IntervalMatrix() = default;
    IntervalMatrix(std::size_t rows, std::size_t cols, Interval fill = Interval{});
    /// Degenerate enclosure of a point matrix.
    explicit IntervalMatrix(const Matrix& m);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    Interval& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const Interval& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] Matrix mid() const;
    /// Elementwise max(|lo|, |hi|).
    [[nodiscard]] Matrix mag() const;
    [[nodiscard]] bool contains(const Matrix& m) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Interval> data_;
};

/// Rigorous enclosures of matrix products. Throw std::invalid_argument on shape mismatch.
IntervalMatrix enclose_product(const Matrix& a, const Matrix& b);
IntervalMatrix operator*(const IntervalMatrix& a, const IntervalMatrix& b);
IntervalMatrix operator*(const IntervalMatrix& a, const Matrix& b);
Box operator*(const IntervalMatrix& a, const Box& x);

} // namespace affiter
