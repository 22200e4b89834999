#pragma once

#include "bhl/dense_field.hpp"
#include "bhl/params.hpp"
#include "bhl/solvers.hpp"
#include "bhl/space.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace bhl {

enum class InnerSolver {
    picard, ///< the contraction map itself; guaranteed for eps <= eps_star
    newton  ///< tridiagonal Newton; unsupported by the theory, for eps > eps_star experiments
};

struct StepConfig {
    double eps = 0.01;
    double fp_tol = 1e-10;
    int max_iter = 10000;
    bool enforce_eps_star = true;
    Index max_half_width = 128; ///< window clamp K
    InnerSolver solver = InnerSolver::picard;
};

/// Throws ConfigError for malformed values and StepTooLarge when the cap is
/// enforced and eps > eps_star.
void validate(const StepConfig& cfg, const DerivedConstants& dc);

struct StepReport {
    int iterations = 0;
    double residual = 0.0;
    double clipped_mass = 0.0;
    bool started_outside_ball = false;
};

struct StepResult {
    LatticeWindow state;
    StepReport report;
};

/// One implicit Euler step u_next = u_prev + eps F(u_next) on a dense space.
/// The caller is responsible for validating cfg.
SolveStats implicit_step_dense(const Params& p, const Space& s, const DenseForce& f, const StepConfig& cfg,
                               std::span<const double> prev, std::span<double> next);

StepResult implicit_step_detailed(const Params& p, const StepConfig& cfg, const LatticeWindow& u_prev);

LatticeWindow implicit_step(const Params& p, const StepConfig& cfg, const LatticeWindow& u_prev);

/// States u_0..u_N of the discrete semigroup S_eps(n).
struct Trajectory {
    std::vector<LatticeWindow> states;
    std::vector<StepReport> reports; ///< reports[n] belongs to the step producing states[n + 1]
    double eps = 0.0;
    std::uint64_t params_hash = 0;
};

/// Failures carry the index of the step that failed in step_index.
Trajectory run_trajectory(const Params& p, const StepConfig& cfg, const LatticeWindow& u0, std::size_t n_steps);

/// Stable identifier of a parameter set.
std::uint64_t params_hash(const Params& p);

/// Continuous-time flow u(t, u0) by classical RK4 with step dt_ref, on the
/// window [-K, K]. t must be an integer multiple of dt_ref.
LatticeWindow reference_flow(const Params& p, const LatticeWindow& u0, double t, double dt_ref,
                             Index max_half_width = 128);

/// In-place dense variant; returns the largest per-step clipped mass.
double reference_flow_dense(const Params& p, const Space& s, const DenseForce& f, std::span<double> u, double t,
                            double dt_ref);

/// ||u(eps, y) - S_eps(1) y||.
double local_error(const Params& p, double eps, const LatticeWindow& y, double dt_ref, StepConfig base = {});

/// ||u(T, y) - S_eps(T / eps) y||; T must be a multiple of eps.
double global_error(const Params& p, double eps, const LatticeWindow& y, double T, double dt_ref,
                    StepConfig base = {});

/// Number of whole steps of size h in t; throws ConfigError if t is not a multiple.
std::size_t steps_in(double t, double h);

} // namespace bhl
