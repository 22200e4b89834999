#include "bhl/attractor.hpp"

#include "bhl/dense_field.hpp"
#include "bhl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

namespace bhl {

void validate(const AttractorConfig& cfg) {
    if (cfg.sample_count < 1) throw ConfigError("sample_count must be positive");
    if (cfg.stabilization_gap < 1) throw ConfigError("stabilization_gap must be positive");
    if (!(cfg.stabilization_tol > 0.0)) throw ConfigError("stabilization_tol must be positive");
    if (cfg.max_rounds < 1) throw ConfigError("max_rounds must be positive");
}

std::size_t default_burn_in(double eps, double gap) {
    if (!(eps > 0.0) || !(gap > 0.0)) throw ConfigError("default_burn_in: eps and gap must be positive");
    return static_cast<std::size_t>(std::ceil(20.0 / (eps * gap)));
}

NotStabilized::NotStabilized(double d, PointCloud c)
    : NumericalFailure("attractor cloud at eps = " + std::to_string(c.meta.eps) +
                       " did not stabilize; last round distance " + std::to_string(d)),
      last_distance(d), cloud(std::move(c)) {}

PointCloud sample_ball(double radius, const Space& space, std::size_t count, std::uint64_t seed) {
    if (!(radius > 0.0)) throw ConfigError("sample_ball: radius must be positive");
    if (count < 1) throw ConfigError("sample_ball: count must be positive");
    const std::size_t dim = space.dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    PointCloud c;
    c.space = space;
    c.meta.seed = seed;
    if (space.kind == SpaceKind::truncated) c.meta.m = space.half_width;
    c.points.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> x(dim);
        double nrm = 0.0;
        while (nrm == 0.0) {
            for (double& v : x) v = normal(rng);
            nrm = norm(x);
        }
        const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
        for (double& v : x) v *= r / nrm;
        const double got = norm(x);
        if (got > radius) {
            for (double& v : x) v *= radius / got;
        }
        c.points.push_back(std::move(x));
    }
    return c;
}

CloudStepper implicit_euler_stepper(const Params& p, const StepConfig& cfg, const Space& space) {
    const DerivedConstants dc = derived_constants(p);
    validate(cfg, dc);
    auto force = std::make_shared<const DenseForce>(DenseForce::make(p.f, space));
    CloudStepper st;
    st.space = space;
    st.step_size = cfg.eps;
    st.decay_gap = dc.gap();
    st.advance = [p, cfg, space, force](std::span<double> u) {
        std::vector<double> prev(u.begin(), u.end());
        const SolveStats s = implicit_step_dense(p, space, *force, cfg, prev, u);
        if (s.clipped_mass > kClipWarnThreshold) note_warning(Warning::tail_clipped);
    };
    return st;
}

CloudStepper reference_flow_stepper(const Params& p, const Space& space, double step_size, double dt_ref) {
    const DerivedConstants dc = derived_constants(p);
    if (!(dt_ref > 0.0)) throw ConfigError("dt_ref must be positive");
    (void)steps_in(step_size, dt_ref);
    auto force = std::make_shared<const DenseForce>(DenseForce::make(p.f, space));
    CloudStepper st;
    st.space = space;
    st.step_size = step_size;
    st.decay_gap = dc.gap();
    st.advance = [p, space, force, step_size, dt_ref](std::span<double> u) {
        const double clip = reference_flow_dense(p, space, *force, u, step_size, dt_ref);
        if (clip > kClipWarnThreshold) note_warning(Warning::tail_clipped);
    };
    return st;
}

void evolve(PointCloud& cloud, const CloudStepper& stepper, std::size_t n) {
    if (!(cloud.space == stepper.space)) throw SpaceMismatch("evolve: cloud and stepper live in different spaces");
    kernels::evolve_parallel(cloud.points, stepper.advance, n);
    cloud.meta.steps_evolved += n;
}

AttractorResult attractor_approx(const CloudStepper& stepper, const AttractorConfig& cfg, double ball_radius,
                                 bool keep_snapshots) {
    validate(cfg);
    const std::size_t burn =
        cfg.burn_in > 0 ? cfg.burn_in : default_burn_in(stepper.step_size, stepper.decay_gap);

    AttractorResult res;
    res.cloud = sample_ball(ball_radius, stepper.space, cfg.sample_count, cfg.seed);
    res.cloud.meta.eps = stepper.step_size;
    evolve(res.cloud, stepper, burn);
    if (keep_snapshots) res.snapshots.push_back(res.cloud);

    for (std::size_t r = 1; r <= cfg.max_rounds; ++r) {
        PointCloud before = res.cloud;
        evolve(res.cloud, stepper, cfg.stabilization_gap);
        res.rounds = r;
        res.last_distance = hausdorff_sym(before, res.cloud);
        res.round_distances.push_back(res.last_distance);
        if (keep_snapshots) res.snapshots.push_back(res.cloud);
        if (res.last_distance < cfg.stabilization_tol) return res;
    }
    throw NotStabilized(res.last_distance, std::move(res.cloud));
}

namespace {

void check_pair(const PointCloud& a, const PointCloud& b) {
    if (!(a.space == b.space)) {
        throw SpaceMismatch("clouds live in different spaces: " + to_string(a.space) + " vs " + to_string(b.space));
    }
    if (a.points.empty() || b.points.empty()) throw ConfigError("Hausdorff distance of an empty cloud");
}

} // namespace

double hausdorff_semi(const PointCloud& a, const PointCloud& b) {
    check_pair(a, b);
    return kernels::semi_hausdorff_parallel(a.points, b.points);
}

double hausdorff_sym(const PointCloud& a, const PointCloud& b) {
    check_pair(a, b);
    return std::max(kernels::semi_hausdorff_parallel(a.points, b.points),
                    kernels::semi_hausdorff_parallel(b.points, a.points));
}

double cloud_norm(const PointCloud& a) {
    if (a.points.empty()) throw ConfigError("norm of an empty cloud");
    double best = 0.0;
    for (const auto& p : a.points) best = std::max(best, norm(p));
    return best;
}

PointCloud embed(const PointCloud& a, const Space& window) {
    if (window.kind != SpaceKind::window) throw SpaceMismatch("embed: target must be a window space");
    if (a.space.half_width > window.half_width) {
        throw SpaceMismatch("embed: " + to_string(a.space) + " does not fit in " + to_string(window));
    }
    PointCloud out;
    out.space = window;
    out.meta = a.meta;
    const auto shift = static_cast<std::size_t>(window.half_width - a.space.half_width);
    out.points.reserve(a.points.size());
    for (const auto& p : a.points) {
        std::vector<double> x(window.dim(), 0.0);
        std::copy(p.begin(), p.end(), x.begin() + static_cast<std::ptrdiff_t>(shift));
        out.points.push_back(std::move(x));
    }
    return out;
}

double tail_profile(const PointCloud& a, std::int64_t k) {
    if (k < 1) throw ConfigError("tail_profile: k must be positive");
    if (a.space.kind == SpaceKind::truncated && a.space.half_width < 2 * k) {
        throw ConfigError("tail_profile: truncated cloud needs m >= 2k");
    }
    double best = 0.0;
    for (const auto& p : a.points) best = std::max(best, tail_mass(p, a.space.first_index(), k));
    return best;
}

} // namespace bhl
