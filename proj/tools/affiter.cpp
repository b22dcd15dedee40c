// affiter: toy reproduction, generated experiments, timing and width bounds.

#include "affiter/bounds.hpp"
#include "affiter/error.hpp"
#include "affiter/experiment.hpp"
#include "affiter/generator.hpp"
#include "affiter/linalg.hpp"
#include "affiter/strategies.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace affiter;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::size_t iters = 100;
    std::vector<std::string> strategies;
    std::string rigor = "fast";
    std::string out;
    std::size_t dim = 10;
    std::string cond, scale;
    std::uint64_t seed = 1;
    std::optional<std::size_t> condense;
    std::size_t reps = 1;
    std::string target = "toy";
    std::string basis = "identity";
    double x0_radius = 0.05;
    double b_radius = 0.00705;
    std::string affine_errors = "promote";
    std::size_t kmax = 2000;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--strategies", f.strategies, "Comma list of naive,qr,svd_u,svd_v,lohner,kstep,affine")
        ->delimiter(',');
    sub->add_option("--rigor", f.rigor, "fast or verified")->check(CLI::IsMember({"fast", "verified"}));
    sub->add_option("--out", f.out, "Output file (default: stdout)");
    sub->add_option("--condense", f.condense, "Keep at most K affine symbols per component");
    sub->add_option("--affine-errors", f.affine_errors, "promote or accumulate")
        ->check(CLI::IsMember({"promote", "accumulate"}));
    sub->add_option("--kmax", f.kmax, "Largest k tried by the k-step search")->check(CLI::PositiveNumber);
}

void add_generated(CLI::App* sub, Flags& f, bool required)
{
    sub->add_option("--dim", f.dim, "Dimension d")->required(required)->check(CLI::Range(2, 100000));
    sub->add_option("--cond", f.cond, "well or ill")->required(required)->check(CLI::IsMember({"well", "ill"}));
    sub->add_option("--scale", f.scale, "well or ill")->required(required)->check(CLI::IsMember({"well", "ill"}));
    sub->add_option("--seed", f.seed, "Generator seed")->required(required);
    sub->add_option("--x0-radius", f.x0_radius, "Radius of x0 components")->check(CLI::NonNegativeNumber);
    sub->add_option("--b-radius", f.b_radius, "Radius of b components")->check(CLI::NonNegativeNumber);
}

ExperimentConfig make_config(const Flags& f, bool toy)
{
    ExperimentConfig cfg;
    cfg.toy = toy;
    cfg.dim = f.dim;
    cfg.seed = f.seed;
    cfg.n = f.iters;
    cfg.x0_radius = f.x0_radius;
    cfg.b_radius = f.b_radius;
    if (!f.cond.empty()) cfg.cls.cond = *parse_level(f.cond);
    if (!f.scale.empty()) cfg.cls.scale = *parse_level(f.scale);
    cfg.rigor = *parse_rigor(f.rigor);
    if (!f.strategies.empty()) {
        cfg.strategies.clear();
        for (const auto& name : f.strategies) {
            if (name.empty()) continue;
            const auto k = parse_strategy(name);
            if (!k) throw UsageError("unknown strategy '" + name + "'");
            cfg.strategies.push_back(*k);
        }
    }
    if (f.condense) cfg.options.condense = *f.condense;
    cfg.options.affine_errors = f.affine_errors == "promote" ? ErrorPolicy::promote : ErrorPolicy::accumulate;
    cfg.options.kmax = f.kmax;
    if (cfg.n < 1) throw UsageError("--iters must be at least 1");
    return cfg;
}

void warn_regime(const GeneratedMatrix& g)
{
    if (g.rho < 1.0 && g.perron > 1.0) return;
    std::cerr << "warning: matrix outside the regime rho(A) < 1 < rho(|A|) (rho=" << g.rho
              << ", perron=" << g.perron << ")\n";
}

/// Returns 2 when some strategy failed, 0 otherwise.
int run_traces(const ExperimentConfig& cfg, std::ostream& os)
{
    const Experiment e = build_experiment(cfg);
    warn_regime(e.generated);
    const auto traces = run_strategies(e.problem, cfg.strategies, cfg.options);
    write_trace_csv(os, cfg, traces);
    int rc = 0;
    for (const auto& t : traces)
        if (!t.failure.empty()) {
            std::cerr << "error: " << to_string(t.strategy) << ": " << t.failure << '\n';
            rc = 2;
        }
    return rc;
}

int run_bench(const Flags& f, std::ostream& os)
{
    ExperimentConfig base = make_config(f, false);
    std::vector<MatrixClass> classes;
    for (const MatrixClass c : all_classes) {
        if (!f.cond.empty() && c.cond != base.cls.cond) continue;
        if (!f.scale.empty() && c.scale != base.cls.scale) continue;
        classes.push_back(c);
    }
    std::vector<TimingRow> rows;
    for (const MatrixClass c : classes) {
        ExperimentConfig cfg = base;
        cfg.cls = c;
        auto part = bench(cfg, f.reps);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    write_timing_csv(os, rows);
    for (const auto& r : rows)
        if (!r.failure.empty()) {
            std::cerr << "error: " << to_string(r.strategy) << ": " << r.failure << '\n';
            return 2;
        }
    return 0;
}

int run_bound(const Flags& f, std::ostream& os)
{
    const bool toy = f.target == "toy";
    if (!toy && (f.cond.empty() || f.scale.empty()))
        throw UsageError("bound --target run needs --dim, --cond, --scale and --seed");
    if (f.basis == "eigen" && !toy) throw UsageError("--basis eigen is only available for --target toy");
    const ExperimentConfig cfg = make_config(f, toy);

    std::vector<std::pair<std::string, std::string>> preamble = {
        {"target", f.target}, {"basis", f.basis}, {"n", std::to_string(cfg.n)}};
    if (f.basis == "eigen") {
        write_bound_csv(os, bound_toy_eigen(cfg.n), preamble);
        return 0;
    }

    const Experiment e = build_experiment(cfg);
    const Matrix& a = e.problem.a;
    Matrix basis;
    if (f.basis == "identity")
        basis = Matrix::identity(a.rows());
    else if (f.basis == "qr")
        basis = qr(a).q;
    else if (f.basis == "svd_u")
        basis = svd(a).u;
    else
        basis = svd(a).v.transpose();

    const Box y0 = mat_vec(inverse(basis), e.problem.x0);
    if (!toy) {
        preamble.emplace_back("dim", std::to_string(cfg.dim));
        preamble.emplace_back("class", to_string(cfg.cls));
        preamble.emplace_back("seed", std::to_string(cfg.seed));
    }
    write_bound_csv(os, bound_general(a, basis, metrics(y0).wid, metrics(e.problem.b).wid, cfg.n), preamble);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Interval enclosures of x_{n+1} = A x_n + b: seven strategies against the wrapping effect"};
    app.require_subcommand(1, 1);
    Flags f;

    auto* toy = app.add_subcommand("toy", "The 2x2 IIR filter example");
    toy->add_option("--iters", f.iters, "Iterations")->required();
    add_common(toy, f);

    auto* run = app.add_subcommand("run", "A generated experiment");
    run->add_option("--iters", f.iters, "Iterations")->required();
    add_generated(run, f, true);
    add_common(run, f);

    auto* bench_cmd = app.add_subcommand("bench", "Mean wall time per strategy and matrix class");
    bench_cmd->add_option("--reps", f.reps, "Repetitions")->required()->check(CLI::PositiveNumber);
    bench_cmd->add_option("--iters", f.iters, "Iterations")->capture_default_str();
    add_generated(bench_cmd, f, false);
    add_common(bench_cmd, f);

    auto* bound = app.add_subcommand("bound", "Theoretical width bounds");
    bound->add_option("--target", f.target, "toy or run")->check(CLI::IsMember({"toy", "run"}));
    bound->add_option("--basis", f.basis, "identity, qr, svd_u, svd_v or eigen")
        ->check(CLI::IsMember({"identity", "qr", "svd_u", "svd_v", "eigen"}));
    bound->add_option("--iters", f.iters, "Iterations");
    add_generated(bound, f, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    auto* active = app.get_subcommands().front();
    std::ostringstream out;
    int rc = 0;
    try {
        if (active == toy)
            rc = run_traces(make_config(f, true), out);
        else if (active == run)
            rc = run_traces(make_config(f, false), out);
        else if (active == bench_cmd)
            rc = run_bench(f, out);
        else
            rc = run_bound(f, out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << active->help();
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n\n" << active->help();
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }

    if (f.out.empty()) {
        std::cout << out.str() << std::flush;
    } else {
        std::ofstream file(f.out, std::ios::binary);
        if (!(file << out.str())) {
            std::cerr << "error: cannot write " << f.out << '\n';
            return 1;
        }
    }
    return rc;
}
