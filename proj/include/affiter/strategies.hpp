#pragma once

#include "affiter/affine.hpp"
#include "affiter/box.hpp"
#include "affiter/matrix.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace affiter {

enum class StrategyKind { naive, qr, svd_u, svd_v, lohner, kstep, affine };

inline constexpr std::array<StrategyKind, 7> all_strategies = {
    StrategyKind::naive, StrategyKind::qr,    StrategyKind::svd_u,  StrategyKind::svd_v,
    StrategyKind::lohner, StrategyKind::kstep, StrategyKind::affine,
};

std::string_view to_string(StrategyKind k) noexcept;
std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept;

/// fast: transition matrices are point products in round-to-nearest and B' stands
/// in for B^-1, as in the original experiments. verified: every transition
/// matrix and inverse factor is an interval enclosure, so containment holds.
enum class Rigor { fast, verified };

std::string_view to_string(Rigor r) noexcept;
std::optional<Rigor> parse_rigor(std::string_view name) noexcept;

struct IterationProblem {
    Matrix a;
    Box b;
    Box x0;
    std::size_t n = 0;
    Rigor rigor = Rigor::fast;
};

/// Throws std::invalid_argument unless A is square and finite and b, x0 match it.
void validate(const IterationProblem& p);

/// The strategies are studied for rho(A) < 1 < rho(|A|); other matrices still run.
struct RegimeReport {
    double rho = 0.0;
    double perron = 0.0;
    [[nodiscard]] bool in_regime() const noexcept { return rho < 1.0 && perron > 1.0; }
};
RegimeReport regime_check(const Matrix& a);

struct TraceRow {
    std::size_t iter = 0;
    double rad_inf = 0.0;
    double rad_2 = 0.0;
    /// Time since the strategy started, including setup.
    std::int64_t elapsed_ns = 0;
};

struct Trace {
    StrategyKind strategy = StrategyKind::naive;
    std::vector<TraceRow> rows;
    std::int64_t wall_ns = 0;
    /// First iteration whose rad_inf exceeded divergence_cutoff; that row is the last one.
    std::optional<std::size_t> diverged_at;
    /// Iterations per recorded row (k for kstep, 1 otherwise).
    std::size_t stride = 1;
    /// Set when the strategy threw; rows are then empty.
    std::string failure;
};

inline constexpr double divergence_cutoff = 1e300;

struct RunOptions {
    ErrorPolicy affine_errors = ErrorPolicy::promote;
    std::size_t condense = keep_all;
    /// Upper limit for the k-step search.
    std::size_t kmax = 2000;
    /// Called with every recorded enclosure, in original coordinates.
    std::function<void(std::size_t iter, const Box& x)> observer;
};

Trace run_naive(const IterationProblem& p, const RunOptions& opt = {});
/// Constant orthogonal change of coordinates x = B y.
Trace run_basis(const IterationProblem& p, StrategyKind kind, const RunOptions& opt = {});
Trace run_qr(const IterationProblem& p, const RunOptions& opt = {});
Trace run_svd_u(const IterationProblem& p, const RunOptions& opt = {});
Trace run_svd_v(const IterationProblem& p, const RunOptions& opt = {});
Trace run_lohner(const IterationProblem& p, const RunOptions& opt = {});
/// x <- [A^k] x + [I + A + ... + A^(k-1)] b with enclosed matrices in both
/// rigor modes, rows at multiples of k.
Trace run_kstep(const IterationProblem& p, const RunOptions& opt = {});
Trace run_affine(const IterationProblem& p, const RunOptions& opt = {});
Trace run_strategy(StrategyKind kind, const IterationProblem& p, const RunOptions& opt = {});

inline constexpr double kstep_threshold = 0.999;

/// Smallest k <= kmax with perron_root(|A^k|) < theta, by a linear scan since
/// the Perron root of |A^k| is not monotone in k. Throws NumericalError when
/// no such k is found.
std::size_t find_k(const Matrix& a, std::size_t kmax, double theta = kstep_threshold);

} // namespace affiter
