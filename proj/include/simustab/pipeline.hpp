#pragma once

#include <optional>
#include <string>
#include <vector>

#include "simustab/cee.hpp"
#include "simustab/stabdata.hpp"
#include "simustab/synth.hpp"

namespace simustab {

struct ProblemConfig {
    PlantPair plants;
    std::optional<Eigen::MatrixXd> sigma;  // explicit matrix, if any
    std::string sigma_preset;              // named preset, if any
    double alpha = 1.0;
    ModeChoice mode = ModeChoice::automatic;
    std::vector<double> grid;  // lambda grid, default 0:0.1:1
    ZeroTolerances tol;
};

/// Parse "start:step:end" into an inclusive grid.
std::vector<double> parse_grid(const std::string& spec);

/// Parse a JSON config document; errors name the offending field.
ProblemConfig load_config(const std::string& path);

/// Built-in configurations behind `reproduce example1|example2`.
ProblemConfig reproduce_config(const std::string& name);

struct AnalyzeResult {
    ReducedData rd;
    SweepReport open_loop;
};

struct SolveResult {
    AnalyzeResult analysis;
    Eigen::MatrixXd sigma_used;
    Interpolant itp;
    SolutionReport check;
    double cee_residual = 0.0;
    int continuation_steps = 0;
};

struct SweepResult {
    SolveResult solved;
    RationalMatrix f1;
    DeltaPair dp;
    CompensatorFactors cf;
    SweepReport closed_loop;
    AxisCheckReport axis;
    double bezout_at_0 = 0.0, bezout_at_037 = 0.0, bezout_at_1 = 0.0;
};

AnalyzeResult run_analyze(const ProblemConfig& cfg);
SolveResult run_solve(const ProblemConfig& cfg);
SweepResult run_sweep(const ProblemConfig& cfg);

}  // namespace simustab
