#pragma once

#include "affiter/matrix.hpp"
#include "affiter/random.hpp"
#include "affiter/strategies.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace affiter {

enum class Level { well, ill };

std::string_view to_string(Level l) noexcept;
std::optional<Level> parse_level(std::string_view name) noexcept;

/// Condition (singular values from 1 down to 1e-2 or 1e-10) and scaling
/// (coefficient magnitudes spanning about 1 or about 1e10).
struct MatrixClass {
    Level cond = Level::well;
    Level scale = Level::well;
    friend bool operator==(const MatrixClass&, const MatrixClass&) = default;
};

inline constexpr std::array<MatrixClass, 4> all_classes = {
    MatrixClass{Level::well, Level::well},
    MatrixClass{Level::well, Level::ill},
    MatrixClass{Level::ill, Level::well},
    MatrixClass{Level::ill, Level::ill},
};

/// "<cond>/<scale>", e.g. "well/ill".
std::string to_string(MatrixClass c);

/// Q of the QR factorization of a standard-normal matrix, with column signs
/// chosen so that R has a positive diagonal.
Matrix random_orthogonal(std::size_t d, Rng& rng);

struct GeneratedMatrix {
    Matrix a;
    /// Diagonal of the similarity D used for ill scaling; all ones otherwise.
    Vector scaling;
    double rho = 0.0;
    double perron = 0.0;
    /// A = factor * (M + shift I).
    double shift = 0.0;
    double factor = 1.0;
};

/// Tuning targets for A = c (M + s I).
inline constexpr double target_rho = 0.965;
inline constexpr double accept_rho = 0.97;
inline constexpr double accept_perron = 1.1;

/// Random matrix of the given class in the regime rho(A) < 1 < rho(|A|):
/// M0 = U diag(sigma) V' with geometric sigma, optionally D M0 D^-1 with
/// log-uniform D in [1, 1e10], then the first s on the grid 0, 0.1, ..., 2
/// whose c = target_rho / rho(M + s I) passes both acceptance tests.
/// Throws NumericalError when the grid has no hit.
GeneratedMatrix gen_matrix(std::size_t d, MatrixClass cls, std::uint64_t seed);

/// The (s, c) search alone, for a given M.
GeneratedMatrix tune_matrix(const Matrix& m, Vector scaling);

/// Measured certificates of a fixed matrix, shift 0 and factor 1.
GeneratedMatrix certify(const Matrix& a);

/// sigma_max / sigma_min by SVD (+inf when singular).
double condition_estimate(const Matrix& a);

/// The 2x2 IIR filter example: A = [[0, 1], [-0.9, 1.8]],
/// x0 = ([0, 0], [1, 1.1]), b = 4.7e-2 * 3.0 * ([0, 0], [9.95, 10.05]).
Matrix toy_matrix();
IterationProblem toy_problem(std::size_t n, Rigor rigor = Rigor::fast);

/// Zero-centred x0 and b with the given radii. For ill-scaled matrices the
/// radius of component j is multiplied by D_j / max D so that the box is
/// shaped like the scaled coordinates.
IterationProblem make_problem(const GeneratedMatrix& g, std::size_t n, Rigor rigor, double x0_radius,
                              double b_radius);

} // namespace affiter
