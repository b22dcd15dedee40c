#include "support.hpp"

#include "affiter/bounds.hpp"
#include "affiter/error.hpp"
#include "affiter/experiment.hpp"
#include "affiter/generator.hpp"
#include "affiter/linalg.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <complex>
#include <limits>
#include <sstream>

using namespace affiter;
using namespace testing;

namespace {

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

/// The CSV with the trailing wall_ns field of every data row removed.
std::string without_timing(const std::string& csv)
{
    std::string out;
    for (const auto& line : lines_of(csv)) {
        if (!line.empty() && line[0] != '#' && line.rfind("strategy,", 0) != 0)
            out += line.substr(0, line.rfind(',')) + '\n';
        else
            out += line + '\n';
    }
    return out;
}

Vector widths(const Box& x)
{
    return metrics(x).wid;
}

/// Naive ||wid||_2 trace must stay below general_2 at every iteration.
void check_domination(const IterationProblem& p)
{
    const BoundReport r = bound_general(p.a, Matrix::identity(p.a.rows()), widths(p.x0), widths(p.b), p.n);
    const Trace t = run_naive(p);
    const Vector& g2 = r.column("general_2");
    const Vector& ginf = r.column("general_inf");
    REQUIRE(t.rows.size() == p.n + 1);
    for (std::size_t k = 0; k <= p.n; ++k) {
        CHECK(2 * t.rows[k].rad_2 <= g2[k]);
        // In the max norm the toy bound is attained, so the computed widths
        // may exceed it by their own outward rounding.
        CHECK(2 * t.rows[k].rad_inf <= ginf[k] * (1 + 1e-12));
    }
}

double coefficient_spread(const Matrix& a)
{
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double v = std::fabs(a(i, j));
            if (v == 0.0) continue;
            hi = std::max(hi, v);
            lo = std::min(lo, v);
        }
    return hi / lo;
}

} // namespace

TEST_CASE("random orthogonal matrices")
{
    // d = 1: Q = sign(z) so that R = |z| > 0.
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        Rng one(seed, RngStream::left_factor), z(seed, RngStream::left_factor);
        const double q1 = random_orthogonal(1, one)(0, 0);
        CHECK(std::fabs(q1) == 1.0);
        CHECK(q1 * z.normal() > 0.0);
    }

    Rng a(7, RngStream::left_factor), b(7, RngStream::left_factor), c(8, RngStream::left_factor);
    const Matrix qa = random_orthogonal(6, a), qb = random_orthogonal(6, b), qc = random_orthogonal(6, c);
    CHECK(qa == qb);
    CHECK(!(qa == qc));

    Rng big(9, RngStream::left_factor);
    CHECK(orthogonality_residual(random_orthogonal(50, big)) <= 1e-12 * 50);

    // Positive diagonal of R: Q'Z has a positive diagonal for the Z behind Q,
    // which a fresh generator on the same stream reproduces.
    Rng z_rng(10, RngStream::left_factor), q_rng(10, RngStream::left_factor);
    Matrix z(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) z(i, j) = z_rng.normal();
    const Matrix r = random_orthogonal(5, q_rng).transpose() * z;
    for (std::size_t i = 0; i < 5; ++i) CHECK(r(i, i) > 0.0);
}

TEST_CASE("generated matrices carry their certificates")
{
    for (std::size_t d : {2u, 10u}) {
        for (const MatrixClass& cls : all_classes) {
            for (std::uint64_t seed = 1; seed <= 4; ++seed) {
                const GeneratedMatrix g = gen_matrix(d, cls, seed);
                CHECK(g.a.rows() == d);
                CHECK(g.rho <= accept_rho);
                CHECK(g.perron >= accept_perron);
                CHECK(rho_estimate(g.a).value < 1.0);
                CHECK(perron_root(g.a.abs()).value > 1.0);
            }
        }
    }
    // This draw has rho(|M|) / rho(M) too small for any shift on the grid.
    CHECK_THROWS_AS(gen_matrix(10, MatrixClass{Level::ill, Level::well}, 5), NumericalError);
    const GeneratedMatrix x = gen_matrix(10, MatrixClass{Level::ill, Level::well}, 3);
    const GeneratedMatrix y = gen_matrix(10, MatrixClass{Level::ill, Level::well}, 3);
    CHECK(x.a == y.a);
}

TEST_CASE("toy certificates")
{
    const GeneratedMatrix c = certify(toy_matrix());
    CHECK(std::fabs(c.rho - 0.9487) <= 1e-3);
    CHECK(std::fabs(c.perron - 2.2077) <= 1e-3);
    CHECK(c.shift == 0.0);
    CHECK(c.factor == 1.0);
}

TEST_CASE("tuning rejects matrices outside the regime")
{
    // |M| = M for a nonnegative M, so rho(|A|) = rho(A) < 1 at every (s, c).
    CHECK_THROWS_AS(tune_matrix(Matrix{{0.5, 0.2}, {0.1, 0.3}}, Vector(2, 1.0)), NumericalError);
}

TEST_CASE("ill scaling")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const GeneratedMatrix ill = gen_matrix(10, MatrixClass{Level::well, Level::ill}, seed);
        CHECK(coefficient_spread(ill.a) >= 1e6);
        const GeneratedMatrix well = gen_matrix(10, MatrixClass{Level::well, Level::well}, seed);
        CHECK(condition_estimate(ill.a) > condition_estimate(well.a));
        for (double s : well.scaling) CHECK(s == 1.0);
    }
    const GeneratedMatrix g = gen_matrix(10, MatrixClass{Level::well, Level::ill}, 1);
    const IterationProblem p = make_problem(g, 5, Rigor::fast, 0.05, 0.00705);
    double dmax = 0.0;
    for (double s : g.scaling) dmax = std::max(dmax, s);
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(p.x0[j].mid() == 0.0);
        CHECK(p.x0[j].rad() == doctest::Approx(0.05 * g.scaling[j] / dmax).epsilon(1e-12));
    }
}

TEST_CASE("general bounds")
{
    const IterationProblem toy = toy_problem(100);
    SUBCASE("B = I reduces to the simplification in the max norm")
    {
        const BoundReport r = bound_general(toy.a, Matrix::identity(2), widths(toy.x0), widths(toy.b), 100);
        CHECK(r.column("general_inf") == r.column("orthogonal_inf"));
        CHECK(r.constant("kappa_inf") == 1.0);
        CHECK(r.iterations() == 101);
        const Vector& g = r.column("general_2");
        for (std::size_t k = 1; k <= 100; ++k) CHECK(g[k] >= g[k - 1]);
        CHECK_THROWS_AS(static_cast<void>(r.column("nope")), std::out_of_range);
    }
    SUBCASE("zero widths give zero bounds")
    {
        const BoundReport r = bound_general(toy.a, qr(toy.a).q, Vector(2, 0.0), Vector(2, 0.0), 30);
        for (const auto& c : r.columns)
            for (double v : c.values) CHECK(v == 0.0);
    }
    SUBCASE("domination of the naive widths")
    {
        check_domination(toy);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const GeneratedMatrix g = gen_matrix(10, all_classes[(seed - 1) % 4], seed);
            check_domination(make_problem(g, 100, Rigor::fast, 0.05, 0.00705));
        }
    }
    SUBCASE("orthogonal bases")
    {
        const Matrix q = qr(toy.a).q;
        const BoundReport r = bound_general(toy.a, q, widths(toy.x0), widths(toy.b), 10);
        CHECK(r.constant("kappa_inf") >= 1.0);
        CHECK(r.constant("kappa_2") >= 1.0);
        CHECK(r.constant("kappa_2") <= 2.0 + 1e-12);  // ||Q||_2 <= ||Q||_F = sqrt(2) for 2x2
        CHECK(r.constant("norm_a_2") == doctest::Approx(svd(toy.a).sigma[0]).epsilon(1e-10));
    }
    CHECK_THROWS_AS(bound_general(toy.a, Matrix{{1, 2}, {2, 4}}, widths(toy.x0), widths(toy.b), 3), NumericalError);
    CHECK_THROWS_AS(bound_general(toy.a, Matrix::identity(3), widths(toy.x0), widths(toy.b), 3),
                    std::invalid_argument);
}

TEST_CASE("eigenvector bounds for the toy")
{
    const BoundReport r = bound_toy_eigen(50);
    CHECK(r.constant("rho") == doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
    CHECK(std::fabs(r.constant("rho") - 0.9487) <= 1e-4);

    // Oracle: unit eigenvectors from a complex eigensolver, kappa from a complex SVD.
    Eigen::Matrix2d a;
    a << 0, 1, -0.9, 1.8;
    const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(a.cast<std::complex<double>>());
    Eigen::Matrix2cd p = es.eigenvectors();
    for (int j = 0; j < 2; ++j) p.col(j).normalize();
    const Eigen::Vector2d sv = Eigen::JacobiSVD<Eigen::Matrix2cd>(p).singularValues();
    const double kappa = sv(0) / sv(1);
    CHECK(r.constant("kappa_2_p") >= 1.0);
    CHECK(r.constant("kappa_2_p") == doctest::Approx(kappa).epsilon(1e-10));
    CHECK(toy_eigenvector_condition() == r.constant("kappa_2_p"));

    const bool grows = kappa * std::sqrt(0.9) > 1.0;
    CHECK(grows);
    const Vector& e = r.column("eigen_2");
    CHECK(e.size() == 51);
    CHECK(e[50] > e[10]);
    bool found = false;
    for (const auto& [k, v] : r.notes)
        if (k == "eigen_2") found = v.rfind("grows", 0) == 0;
    CHECK(found);
    for (double v : r.column("nedialkov_jackson")) CHECK(v >= 0.0);
}

TEST_CASE("trace CSV")
{
    ExperimentConfig cfg;
    cfg.dim = 4;
    cfg.seed = 5;
    cfg.n = 20;
    std::ostringstream a, b;
    write_trace_csv(a, cfg, run_experiment(cfg));
    write_trace_csv(b, cfg, run_experiment(cfg));
    CHECK(without_timing(a.str()) == without_timing(b.str()));

    const auto lines = lines_of(a.str());
    CHECK(lines[0] == "# dim=4");
    CHECK(lines[1] == "# class=well/well");
    CHECK(lines[2] == "# seed=5");
    CHECK(lines[3] == "# n=20");
    CHECK(lines[4] == "# rigor=fast");
    CHECK(lines[5] == "# generator=1");
    std::size_t data = 0;
    bool header = false;
    for (const auto& l : lines) {
        if (l == "strategy,iter,rad_inf,rad_2,wall_ns") header = true;
        else if (header) ++data;
    }
    CHECK(header);
    const std::size_t k = find_k(build_experiment(cfg).problem.a, 2000);
    CHECK(data == 6 * 21 + (20 / k + 1));
    CHECK(a.str().find('\r') == std::string::npos);

    ExperimentConfig empty = cfg;
    empty.strategies.clear();
    std::ostringstream e;
    write_trace_csv(e, empty, run_experiment(empty));
    const auto el = lines_of(e.str());
    CHECK(el.back() == "strategy,iter,rad_inf,rad_2,wall_ns");
    CHECK(el.size() == 7);

    ExperimentConfig toy;
    toy.toy = true;
    toy.n = 10;
    toy.strategies = {StrategyKind::naive};
    std::ostringstream t;
    write_trace_csv(t, toy, run_experiment(toy));
    const auto tl = lines_of(t.str());
    CHECK(tl[0] == "# dim=2");
    CHECK(tl[1] == "# class=toy");
    // Doubled radii grow by about 2.2 per step beyond k = 5.
    std::vector<double> rad;
    for (const auto& l : tl)
        if (l.rfind("naive,", 0) == 0) {
            const auto c1 = l.find(',', 6), c2 = l.find(',', c1 + 1);
            rad.push_back(std::stod(l.substr(c1 + 1, c2 - c1 - 1)));
        }
    REQUIRE(rad.size() == 11);
    for (std::size_t j = 5; j < 10; ++j) CHECK(rad[j + 1] / rad[j] == doctest::Approx(2.2).epsilon(0.01));
}

TEST_CASE("experiment validation and failures")
{
    ExperimentConfig cfg;
    cfg.dim = 1;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.dim = 3;
    cfg.n = 0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.n = 5;
    cfg.x0_radius = -1;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);

    // kstep cannot find k within kmax = 1 on the toy: a failure line, not an exception.
    ExperimentConfig toy;
    toy.toy = true;
    toy.n = 5;
    toy.strategies = {StrategyKind::kstep, StrategyKind::naive};
    toy.options.kmax = 1;
    const auto traces = run_experiment(toy);
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].strategy == StrategyKind::naive);
    CHECK(!traces[1].failure.empty());
    CHECK(traces[1].rows.empty());
    std::ostringstream os;
    write_trace_csv(os, toy, traces);
    CHECK(os.str().find("# failed=kstep: ") != std::string::npos);
}

TEST_CASE("timing")
{
    ExperimentConfig cfg;
    cfg.dim = 5;
    cfg.n = 10;
    const auto rows = bench(cfg, 1);
    CHECK(rows.size() == all_strategies.size());
    for (const auto& r : rows) {
        CHECK(r.reps == 1);
        CHECK(r.dim == 5);
        CHECK(r.mean_ns > 0.0);
        CHECK(r.failure.empty());
    }
    std::ostringstream os;
    write_timing_csv(os, rows);
    const auto lines = lines_of(os.str());
    CHECK(lines[0] == "strategy,class,dim,reps,mean_ns");
    CHECK(lines.size() == 1 + rows.size());
    CHECK(lines[1].rfind("naive,well/well,5,1,", 0) == 0);
}

TEST_CASE("number formatting")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
    Rng rng(50, RngStream::sampling);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-1, 1) * std::pow(10.0, rng.uniform(-300, 300));
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("bound CSV")
{
    const BoundReport r = bound_toy_eigen(3);
    std::ostringstream os;
    write_bound_csv(os, r, {{"target", "toy"}});
    const auto lines = lines_of(os.str());
    CHECK(lines[0] == "# target=toy");
    std::size_t header = 0;
    while (header < lines.size() && lines[header][0] == '#') ++header;
    REQUIRE(header < lines.size());
    CHECK(lines[header] == "iter,eigen_2,nedialkov_jackson");
    CHECK(lines.size() == header + 5);
    CHECK(lines[header + 1].rfind("0,", 0) == 0);
}
