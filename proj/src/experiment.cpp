#include "affiter/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <stdexcept>

namespace affiter {

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void validate(const ExperimentConfig& cfg)
{
    if (!cfg.toy && cfg.dim < 2) throw std::invalid_argument("dimension must be at least 2");
    if (cfg.n < 1) throw std::invalid_argument("iteration count must be at least 1");
    const auto ok = [](double r) { return std::isfinite(r) && r >= 0.0; };
    if (!ok(cfg.x0_radius) || !ok(cfg.b_radius)) throw std::invalid_argument("radii must be finite and non-negative");
}

Experiment build_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    if (cfg.toy) {
        IterationProblem p = toy_problem(cfg.n, cfg.rigor);
        GeneratedMatrix g = certify(p.a);
        return {std::move(p), std::move(g)};
    }
    GeneratedMatrix g = gen_matrix(cfg.dim, cfg.cls, cfg.seed);
    IterationProblem p = make_problem(g, cfg.n, cfg.rigor, cfg.x0_radius, cfg.b_radius);
    return {std::move(p), std::move(g)};
}

std::vector<Trace> run_strategies(const IterationProblem& p, const std::vector<StrategyKind>& strategies,
                                  const RunOptions& opt)
{
    std::vector<StrategyKind> order = strategies;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<Trace> out;
    out.reserve(order.size());
    for (StrategyKind k : order) {
        try {
            out.push_back(run_strategy(k, p, opt));
        } catch (const std::exception& e) {
            Trace t;
            t.strategy = k;
            t.failure = e.what();
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<Trace> run_experiment(const ExperimentConfig& cfg)
{
    const Experiment e = build_experiment(cfg);
    return run_strategies(e.problem, cfg.strategies, cfg.options);
}

void write_trace_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<Trace>& traces)
{
    os << "# dim=" << (cfg.toy ? 2 : cfg.dim) << '\n'
       << "# class=" << (cfg.toy ? std::string("toy") : to_string(cfg.cls)) << '\n'
       << "# seed=" << cfg.seed << '\n'
       << "# n=" << cfg.n << '\n'
       << "# rigor=" << to_string(cfg.rigor) << '\n'
       << "# generator=" << generator_version << '\n';
    for (const Trace& t : traces) {
        if (!t.failure.empty()) os << "# failed=" << to_string(t.strategy) << ": " << t.failure << '\n';
        if (t.strategy == StrategyKind::kstep && t.failure.empty()) os << "# kstep_k=" << t.stride << '\n';
        if (t.diverged_at) os << "# diverged=" << to_string(t.strategy) << ':' << *t.diverged_at << '\n';
    }
    os << "strategy,iter,rad_inf,rad_2,wall_ns\n";
    for (const Trace& t : traces)
        for (const TraceRow& r : t.rows)
            os << to_string(t.strategy) << ',' << r.iter << ',' << format_double(r.rad_inf) << ','
               << format_double(r.rad_2) << ',' << r.elapsed_ns << '\n';
}

std::vector<TimingRow> bench(const ExperimentConfig& cfg, std::size_t reps)
{
    if (reps < 1) throw std::invalid_argument("reps must be at least 1");
    const Experiment e = build_experiment(cfg);
    std::vector<StrategyKind> order = cfg.strategies;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::vector<TimingRow> out;
    for (StrategyKind k : order) {
        TimingRow row;
        row.strategy = k;
        row.cls = cfg.cls;
        row.dim = e.problem.a.rows();
        row.reps = reps;
        try {
            double total_ns = 0.0, total_iters = 0.0;
            for (std::size_t r = 0; r < reps; ++r) {
                const Trace t = run_strategy(k, e.problem, cfg.options);
                total_ns += static_cast<double>(t.wall_ns);
                total_iters += t.rows.empty() ? 0.0 : static_cast<double>(t.rows.back().iter);
            }
            row.mean_ns = total_ns / static_cast<double>(reps);
            row.mean_iters = total_iters / static_cast<double>(reps);
        } catch (const std::exception& ex) {
            row.failure = ex.what();
        }
        out.push_back(std::move(row));
    }
    return out;
}

void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows)
{
    for (const TimingRow& r : rows)
        if (!r.failure.empty())
            os << "# failed=" << to_string(r.strategy) << ',' << to_string(r.cls) << ": " << r.failure << '\n';
    os << "strategy,class,dim,reps,mean_ns\n";
    for (const TimingRow& r : rows)
        if (r.failure.empty())
            os << to_string(r.strategy) << ',' << to_string(r.cls) << ',' << r.dim << ',' << r.reps << ','
               << format_double(r.mean_ns) << '\n';
}

void write_bound_csv(std::ostream& os, const BoundReport& report,
                     const std::vector<std::pair<std::string, std::string>>& preamble)
{
    for (const auto& [k, v] : preamble) os << "# " << k << '=' << v << '\n';
    for (const auto& [k, v] : report.constants) os << "# " << k << '=' << format_double(v) << '\n';
    for (const auto& [k, v] : report.notes) os << "# " << k << '=' << v << '\n';
    os << "iter";
    for (const auto& c : report.columns) os << ',' << c.name;
    os << '\n';
    for (std::size_t i = 0; i < report.iterations(); ++i) {
        os << i;
        for (const auto& c : report.columns) os << ',' << format_double(c.values[i]);
        os << '\n';
    }
}

} // namespace affiter
