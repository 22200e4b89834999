#pragma once

#include "bhl/cloud.hpp"
#include "bhl/error.hpp"
#include "bhl/implicit_euler.hpp"
#include "bhl/kernels.hpp"
#include "bhl/params.hpp"
#include "bhl/space.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bhl {

struct AttractorConfig {
    std::size_t sample_count = 256;
    std::size_t burn_in = 0; ///< 0 selects default_burn_in
    std::size_t stabilization_gap = 20;
    double stabilization_tol = 1e-7;
    std::size_t max_rounds = 200;
    std::uint64_t seed = 1;
};

void validate(const AttractorConfig& cfg);

/// ceil(20 / (eps (lambda - lambda_star))).
std::size_t default_burn_in(double eps, double gap);

/// The cloud is still available for inspection.
class NotStabilized : public NumericalFailure {
public:
    NotStabilized(double last_distance, PointCloud cloud);
    double last_distance;
    PointCloud cloud;
};

/// count points uniform in the ball of the given radius in the space.
PointCloud sample_ball(double radius, const Space& space, std::size_t count, std::uint64_t seed);

/// One step of a discrete-time map on a dense space.
struct CloudStepper {
    Space space;
    double step_size = 0.0;
    double decay_gap = 0.0; ///< lambda - lambda_star, used for the default burn-in
    kernels::Advance advance;
};

/// S_eps(1) on the space (window clamp or truncated system). Validates cfg.
CloudStepper implicit_euler_stepper(const Params& p, const StepConfig& cfg, const Space& space);

/// The continuous flow over step_size, by RK4 with dt_ref.
CloudStepper reference_flow_stepper(const Params& p, const Space& space, double step_size, double dt_ref);

struct AttractorResult {
    PointCloud cloud;
    std::size_t rounds = 0;
    double last_distance = 0.0;
    std::vector<double> round_distances; ///< symmetric distance between consecutive snapshots
    std::vector<PointCloud> snapshots;   ///< filled when keep_snapshots
};

/// Evolves a sample of the ball by burn_in steps, then by stabilization_gap
/// steps per round until consecutive snapshots are within stabilization_tol.
/// Throws NotStabilized after max_rounds.
AttractorResult attractor_approx(const CloudStepper& stepper, const AttractorConfig& cfg, double ball_radius,
                                 bool keep_snapshots = false);

/// Evolves every point of the cloud by n steps in place (parallel over points).
void evolve(PointCloud& cloud, const CloudStepper& stepper, std::size_t n);

double hausdorff_semi(const PointCloud& a, const PointCloud& b);
double hausdorff_sym(const PointCloud& a, const PointCloud& b);
double cloud_norm(const PointCloud& a);

/// Null expansion of a cloud into a wider window space.
PointCloud embed(const PointCloud& a, const Space& window);

/// max over points of sum_i xi_{k,i} u_i^2.
double tail_profile(const PointCloud& a, std::int64_t k);

} // namespace bhl
