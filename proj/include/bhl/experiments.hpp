#pragma once

#include "bhl/attractor.hpp"
#include "bhl/experiment_config.hpp"
#include "bhl/result_table.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bhl {

struct ExperimentOutput {
    ResultTable table;
    std::vector<std::pair<std::string, PointCloud>> clouds; ///< tag, cloud
};

/// Implicit-Euler attractors for each eps against a fine reference-flow attractor.
/// Columns: eps, d_semi, d_sym, norm, rounds, steps, rel_slack, abs_floor.
ExperimentOutput run_eps_convergence(const ExperimentConfig& cfg);

/// Null-expanded truncated attractors against the window attractor at dim_eps.
/// Columns: m, d_semi, tail_profile, norm, rounds, rel_slack, abs_floor, tail_delta.
ExperimentOutput run_dim_convergence(const ExperimentConfig& cfg);

/// Pullback samples per sigma and realization against the deterministic
/// truncated attractor. Columns: sigma, mean_d, max_d, se_d, mean_R, se_R,
/// max_R_tail, n_ok, n_failed.
ExperimentOutput run_noise_convergence(const ExperimentConfig& cfg);

/// Local and global errors per eps. Columns: eps, dt_ref, local_mean, local_max,
/// global_mean, global_max, local_bound, global_bound. Fitted slopes go in the summary.
ExperimentOutput run_error_order(const ExperimentConfig& cfg);

/// Attractor norms over force scalings and lambda. Columns: lambda, scale,
/// force_norm, lambda_star, bound, norm_window, norm_truncated, slack.
ExperimentOutput run_bounds(const ExperimentConfig& cfg);

/// Runs one experiment by CLI name (converge-eps, converge-dim, ...).
ExperimentOutput run_experiment(const std::string& name, const ExperimentConfig& cfg);

/// First adjacent pair where next > (1 + rel_slack) prev + abs_floor.
struct TrendViolation {
    std::size_t row = 0; ///< index of the later row
    double prev = 0.0;
    double next = 0.0;
    double allowed = 0.0;
};
std::optional<TrendViolation> first_increase(std::span<const double> v, double rel_slack, double abs_floor);

/// Same with per-row slack: next <= prev + max(se_prev, se_next).
std::optional<TrendViolation> first_increase_se(std::span<const double> v, std::span<const double> se);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Seed for a named random stream of an experiment.
std::uint64_t stream_seed(const ExperimentConfig& cfg, const char* stream);

} // namespace bhl
