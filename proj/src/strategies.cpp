#include "affiter/strategies.hpp"

#include "affiter/error.hpp"
#include "affiter/linalg.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace affiter {

namespace {

constexpr std::array<std::string_view, 7> kStrategyNames = {"naive", "qr", "svd_u", "svd_v", "lohner", "kstep", "affine"};

class Recorder {
public:
    Recorder(Trace& t, const RunOptions& opt) : trace_(t), opt_(opt), start_(std::chrono::steady_clock::now()) {}

    /// Returns false once the enclosure has diverged; the caller stops iterating.
    bool record(std::size_t iter, const Box& x)
    {
        const double ri = rad_inf(x);
        const double r2 = rad_2(x);
        trace_.rows.push_back({iter, ri, r2, elapsed()});
        if (opt_.observer) opt_.observer(iter, x);
        if (!(ri <= divergence_cutoff)) {
            trace_.diverged_at = iter;
            return false;
        }
        return true;
    }

    void finish() { trace_.wall_ns = elapsed(); }

private:
    std::int64_t elapsed() const
    {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_).count();
    }

    Trace& trace_;
    const RunOptions& opt_;
    std::chrono::steady_clock::time_point start_;
};

Matrix basis_for(const Matrix& a, StrategyKind kind)
{
    switch (kind) {
    case StrategyKind::qr: return qr(a).q;
    case StrategyKind::svd_u: return svd(a).u;
    case StrategyKind::svd_v: return svd(a).v.transpose();
    default: throw std::invalid_argument("run_basis: strategy without a constant basis");
    }
}

} // namespace

std::string_view to_string(StrategyKind k) noexcept
{
    return kStrategyNames[static_cast<std::size_t>(k)];
}

std::optional<StrategyKind> parse_strategy(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kStrategyNames.size(); ++i)
        if (kStrategyNames[i] == name) return all_strategies[i];
    return std::nullopt;
}

std::string_view to_string(Rigor r) noexcept
{
    return r == Rigor::fast ? "fast" : "verified";
}

std::optional<Rigor> parse_rigor(std::string_view name) noexcept
{
    if (name == "fast") return Rigor::fast;
    if (name == "verified") return Rigor::verified;
    return std::nullopt;
}

void validate(const IterationProblem& p)
{
    const std::size_t d = p.a.rows();
    if (d == 0 || !p.a.square()) throw std::invalid_argument("problem: A must be square and non-empty");
    if (!p.a.all_finite()) throw std::invalid_argument("problem: A has non-finite entries");
    if (p.b.size() != d || p.x0.size() != d) throw std::invalid_argument("problem: b and x0 must have length d");
}

RegimeReport regime_check(const Matrix& a)
{
    return {rho_estimate(a).value, perron_root(a.abs()).value};
}

Trace run_naive(const IterationProblem& p, const RunOptions& opt)
{
    validate(p);
    Trace t;
    t.strategy = StrategyKind::naive;
    Recorder rec(t, opt);
    Box x = p.x0;
    if (rec.record(0, x)) {
        for (std::size_t k = 1; k <= p.n; ++k) {
            x = mat_vec(p.a, x) + p.b;
            if (!rec.record(k, x)) break;
        }
    }
    rec.finish();
    return t;
}

Trace run_basis(const IterationProblem& p, StrategyKind kind, const RunOptions& opt)
{
    validate(p);
    Trace t;
    t.strategy = kind;
    Recorder rec(t, opt);
    if (!rec.record(0, p.x0)) {
        rec.finish();
        return t;
    }
    const Matrix basis = basis_for(p.a, kind);

    if (p.rigor == Rigor::fast) {
        const Matrix binv = basis.transpose();
        const Matrix m = binv * p.a * basis;
        const Box c = mat_vec(binv, p.b);
        Box y = mat_vec(binv, p.x0);
        for (std::size_t k = 1; k <= p.n; ++k) {
            y = mat_vec(m, y) + c;
            if (!rec.record(k, mat_vec(basis, y))) break;
        }
    } else {
        const IntervalMatrix g = enclose_inverse_near_orthogonal(basis);
        const IntervalMatrix m = g * enclose_product(p.a, basis);
        const Box c = g * p.b;
        Box y = g * p.x0;
        for (std::size_t k = 1; k <= p.n; ++k) {
            y = m * y + c;
            if (!rec.record(k, mat_vec(basis, y))) break;
        }
    }
    rec.finish();
    return t;
}

Trace run_qr(const IterationProblem& p, const RunOptions& opt) { return run_basis(p, StrategyKind::qr, opt); }
Trace run_svd_u(const IterationProblem& p, const RunOptions& opt) { return run_basis(p, StrategyKind::svd_u, opt); }
Trace run_svd_v(const IterationProblem& p, const RunOptions& opt) { return run_basis(p, StrategyKind::svd_v, opt); }

Trace run_lohner(const IterationProblem& p, const RunOptions& opt)
{
    validate(p);
    Trace t;
    t.strategy = StrategyKind::lohner;
    Recorder rec(t, opt);
    Box y = p.x0;
    if (!rec.record(0, y)) {
        rec.finish();
        return t;
    }
    Matrix q_prev = Matrix::identity(p.a.rows());
    QRFactors f = qr(p.a);
    for (std::size_t k = 1; k <= p.n; ++k) {
        // f holds (Q_k, R_k); q_prev is Q_{k-1}.
        if (p.rigor == Rigor::fast) {
            const Matrix qt = f.q.transpose();
            y = mat_vec(qt * (p.a * q_prev), y) + mat_vec(qt, p.b);
        } else {
            const IntervalMatrix g = enclose_inverse_near_orthogonal(f.q);
            y = (g * enclose_product(p.a, q_prev)) * y + g * p.b;
        }
        if (!rec.record(k, mat_vec(f.q, y))) break;
        if (k == p.n) break;
        q_prev = f.q;
        f = qr(f.r * f.q);
    }
    rec.finish();
    return t;
}

namespace {

/// x -> power x + sum b, i.e. k steps at once with sum = I + A + ... + A^(k-1).
/// b is the same vector in every step, as in the affine strategy.
struct MacroStep {
    IntervalMatrix power;
    IntervalMatrix sum;
};

IntervalMatrix add(const IntervalMatrix& a, const IntervalMatrix& b)
{
    IntervalMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

/// The outer macro-step applied after the inner one.
MacroStep compose(const MacroStep& outer, const MacroStep& inner)
{
    return {outer.power * inner.power, add(outer.power * inner.sum, outer.sum)};
}

/// Built by repeated squaring. Multiplying one factor of A at a time widens
/// the enclosure by rho(|A|) per factor, which overflows within a few dozen
/// steps for the generated matrices; squaring only pays rho(|A^m|) per level.
MacroStep macro_step(const Matrix& a, std::size_t k)
{
    MacroStep base{IntervalMatrix(a), IntervalMatrix(Matrix::identity(a.rows()))};
    std::optional<MacroStep> result;
    while (k > 0) {
        if (k & 1U) result = result ? compose(base, *result) : base;
        k >>= 1U;
        if (k > 0) base = compose(base, base);
    }
    return *result;
}

} // namespace

std::size_t find_k(const Matrix& a, std::size_t kmax, double theta)
{
    if (!a.square() || a.empty()) throw std::invalid_argument("find_k: A must be square");
    if (kmax == 0) throw std::invalid_argument("find_k: kmax must be positive");
    const auto ok = [&](std::size_t k) {
        try {
            return perron_root(mat_power(a, k).abs()).value < theta;
        } catch (const NumericalError&) {
            return false;
        }
    };

    // rho(|A^k|) is not monotone in k (the toy matrix drops below theta at
    // k = 10 but not at 16), so a doubling search can overshoot the smallest k.
    for (std::size_t k = 1; k <= kmax; ++k)
        if (ok(k)) return k;
    throw NumericalError("find_k: no k <= " + std::to_string(kmax) +
                         " with rho(|A^k|) < 1; the matrix is outside the regime rho(A) < 1");
}

Trace run_kstep(const IterationProblem& p, const RunOptions& opt)
{
    validate(p);
    Trace t;
    t.strategy = StrategyKind::kstep;
    Recorder rec(t, opt);
    const std::size_t k = find_k(p.a, opt.kmax);
    t.stride = k;
    Box x = p.x0;
    if (!rec.record(0, x)) {
        rec.finish();
        return t;
    }
    const std::size_t macro_steps = p.n / k;

    // A^k is enclosed in both modes: a rounded point power would break
    // containment, which this strategy guarantees regardless of rigor.
    const MacroStep m = macro_step(p.a, k);
    const Box s = m.sum * p.b;
    const IntervalMatrix& power = m.power;
    for (std::size_t j = 1; j <= macro_steps; ++j) {
        x = power * x + s;
        if (!rec.record(j * k, x)) break;
    }
    rec.finish();
    return t;
}

Trace run_affine(const IterationProblem& p, const RunOptions& opt)
{
    validate(p);
    Trace t;
    t.strategy = StrategyKind::affine;
    Recorder rec(t, opt);
    if (rec.record(0, p.x0)) {
        AffinePair lifted = aff_lift(p.x0, p.b);
        AffineVector x = std::move(lifted.x);
        for (std::size_t k = 1; k <= p.n; ++k) {
            x = aff_mat_vec_add(p.a, x, lifted.b, opt.affine_errors);
            if (opt.condense != keep_all) x = aff_condense(x, opt.condense);
            if (!rec.record(k, aff_to_box(x))) break;
        }
    }
    rec.finish();
    return t;
}

Trace run_strategy(StrategyKind kind, const IterationProblem& p, const RunOptions& opt)
{
    switch (kind) {
    case StrategyKind::naive: return run_naive(p, opt);
    case StrategyKind::qr:
    case StrategyKind::svd_u:
    case StrategyKind::svd_v: return run_basis(p, kind, opt);
    case StrategyKind::lohner: return run_lohner(p, opt);
    case StrategyKind::kstep: return run_kstep(p, opt);
    case StrategyKind::affine: return run_affine(p, opt);
    }
    throw std::invalid_argument("run_strategy: unknown strategy");
}

} // namespace affiter
