#pragma once

#include <optional>
#include <string>

#include "bvp/approx.hpp"
#include "bvp/bvp.hpp"
#include "bvp/paramlab.hpp"

namespace bvp {

/// Numeric/run options shared by all commands; config values are overridden
/// by CLI flags.
struct Options {
    double tol = kOdeTol;
    double rank_scale = kRankScale;
    double quad_tol = kQuadTol;
    double convergence_tol = kConvergenceTol;
    int probes = 3;
    int probe_degree = 12;
    int grid = 129;
    unsigned long long seed = 1;
    int jobs = 1;
};

struct LoadedConfig {
    std::optional<BvProblem> problem;
    std::optional<ParameterFamily> family;
    std::optional<ApproximationPlan> plan;
    Options options;
};

/// Reads and validates a JSON config file (sections: problem, family, plan,
/// options). Throws ParseError with a field-path diagnostic on any schema
/// violation.
LoadedConfig load_config(const std::string& path);
LoadedConfig parse_config_text(const std::string& text);

}  // namespace bvp
