#pragma once

#include "bhl/attractor.hpp"
#include "bhl/implicit_euler.hpp"
#include "bhl/params.hpp"
#include "bhl/stochastic.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace bhl {

struct Grids {
    std::vector<double> eps_list{0.02, 0.01, 0.005, 0.0025};
    std::vector<Index> m_list{8, 16, 32};
    std::vector<double> sigma_list{0.4, 0.2, 0.1, 0.05, 0.0};
};

struct ReferenceConfig {
    double eps_ref = 0.0005;
    double dt_ref = 0.0005;
};

struct SolverConfig {
    double fp_tol = 1e-10;
    int max_iter = 10000;
    InnerSolver solver = InnerSolver::picard;
};

struct ErrorOrderConfig {
    double horizon = 0.2;        ///< T for the global error
    std::size_t samples = 8;     ///< starting points y in B_{r*}
    Index support = 8;           ///< samples are supported in [-support, support]
    double dt_ref_ratio = 0.01;  ///< dt_ref = ratio * eps
};

struct BoundsConfig {
    double eps = 0.005;
    std::vector<double> lambda_list{8.0, 10.0, 12.0, 16.0};
    std::vector<double> force_scales{1.0, 0.5, 0.25, 0.0};
    Index m = 16;
};

/// Slack for "nonincreasing" checks between adjacent rows:
/// next <= (1 + rel_slack) prev + abs_floor.
struct TrendConfig {
    double rel_slack = 0.1;
    double abs_floor = 1e-7;
};

struct NoiseExperimentConfig {
    Index m = 16;
    std::size_t cloud_size = 16;
};

struct ExperimentConfig {
    Params params;
    Index window_half_width = 128;
    Grids grids;
    AttractorConfig attractor;
    NoiseConfig noise;
    NoiseExperimentConfig noise_experiment;
    ReferenceConfig reference;
    SolverConfig solver;
    ErrorOrderConfig error_order;
    BoundsConfig bounds;
    TrendConfig trend;
    double dim_eps = 0.01;     ///< time step of the m-convergence study
    double tail_delta = 1e-6;  ///< tail threshold for the m-convergence study
    std::string output_dir = "results";
    std::uint64_t master_seed = 20240601; ///< every random stream of an experiment derives from this
};

/// Default experiment setup (force 0.08984375 e_0, so that the whole eps grid
/// sits below eps_star).
ExperimentConfig default_config();

/// Structural checks only: ranges, ordering of grids, eps_ref < min(eps)/4.
/// Throws ConfigError.
void validate_structure(const ExperimentConfig& cfg);

/// validate_structure plus the checks that need derived constants
/// (lambda > lambda_star, eps grid below eps_star).
void validate(const ExperimentConfig& cfg);

/// StepConfig for time step eps on the configured window.
StepConfig step_config(const ExperimentConfig& cfg, double eps);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Missing keys take defaults; unknown keys are errors. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json params_to_json(const Params& p);
Params params_from_json(const nlohmann::json& j);

/// Hex FNV-1a of the canonical JSON of everything that affects results
/// (output_dir excluded).
std::string config_hash(const ExperimentConfig& cfg);

} // namespace bhl
