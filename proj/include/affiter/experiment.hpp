#pragma once

#include "affiter/bounds.hpp"
#include "affiter/generator.hpp"
#include "affiter/strategies.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace affiter {

/// Bumped whenever generation changes in a way that alters matrices for a fixed seed.
inline constexpr std::string_view generator_version = "1";

struct ExperimentConfig {
    /// Use the 2x2 toy problem instead of a generated matrix.
    bool toy = false;
    std::size_t dim = 10;
    MatrixClass cls;
    std::uint64_t seed = 1;
    std::size_t n = 100;
    std::vector<StrategyKind> strategies{all_strategies.begin(), all_strategies.end()};
    Rigor rigor = Rigor::fast;
    double x0_radius = 0.05;
    double b_radius = 0.00705;
    RunOptions options;
};

/// Throws std::invalid_argument for d < 2, n < 1 or invalid radii.
void validate(const ExperimentConfig& cfg);

struct Experiment {
    IterationProblem problem;
    /// Certificates of the generated matrix (also filled for the toy).
    GeneratedMatrix generated;
};

/// Throws NumericalError when generation fails.
Experiment build_experiment(const ExperimentConfig& cfg);

/// Runs each strategy once, in enumeration order. A strategy that throws
/// yields a trace with empty rows and the message in Trace::failure.
std::vector<Trace> run_strategies(const IterationProblem& p, const std::vector<StrategyKind>& strategies,
                                  const RunOptions& opt = {});

std::vector<Trace> run_experiment(const ExperimentConfig& cfg);

/// "# key=value" preamble, then "strategy,iter,rad_inf,rad_2,wall_ns".
/// Radii use the shortest round-trip decimal form, "inf" when unbounded.
/// Failed strategies appear as "# failed=<strategy>: <message>" lines.
void write_trace_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<Trace>& traces);

struct TimingRow {
    StrategyKind strategy = StrategyKind::naive;
    MatrixClass cls;
    std::size_t dim = 0;
    std::size_t reps = 0;
    /// Mean wall time of one strategy run; generation is excluded.
    double mean_ns = 0.0;
    /// Mean number of iterations actually performed (less than n after divergence).
    double mean_iters = 0.0;
    std::string failure;
};

/// Times every configured strategy reps times on the configured class.
std::vector<TimingRow> bench(const ExperimentConfig& cfg, std::size_t reps);

/// "strategy,class,dim,reps,mean_ns"; failures as comment lines.
void write_timing_csv(std::ostream& os, const std::vector<TimingRow>& rows);

/// Preamble lines, constants and notes as "# key=value", then "iter,<columns>".
void write_bound_csv(std::ostream& os, const BoundReport& report,
                     const std::vector<std::pair<std::string, std::string>>& preamble);

/// Shortest decimal that round-trips to x; "inf", "-inf" or "nan" otherwise.
std::string format_double(double x);

} // namespace affiter
