#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace affiter {

using Vector = std::vector<double>;

/// Dense row-major point matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    /// Row-wise literal, e.g. Matrix{{0, 1}, {-0.9, 1.8}}. Throws on ragged rows.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * cols_, cols_};
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    /// Elementwise absolute value |A|.
    [[nodiscard]] Matrix abs() const;
    [[nodiscard]] bool all_finite() const noexcept;

    /// Max absolute row sum.
    [[nodiscard]] double norm_inf() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Round-to-nearest products and sums. Throw std::invalid_argument on shape mismatch.
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double c, const Matrix& a);

/// Euclidean norm with scaling against overflow.
double norm2(std::span<const double> x) noexcept;
double norm_inf(std::span<const double> x) noexcept;

} // namespace affiter
