#include "bhl/implicit_euler.hpp"

#include "bhl/diagnostics.hpp"
#include "bhl/hash.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace bhl {

void validate(const StepConfig& cfg, const DerivedConstants& dc) {
    if (!(cfg.eps > 0.0)) throw ConfigError("eps must be positive");
    if (!(cfg.fp_tol > 0.0)) throw ConfigError("fp_tol must be positive");
    if (cfg.max_iter < 1) throw ConfigError("max_iter must be at least 1");
    if (cfg.max_half_width < 1) throw ConfigError("max_half_width must be at least 1");
    if (cfg.enforce_eps_star && cfg.eps > dc.eps_star) throw StepTooLarge(cfg.eps, dc.eps_star);
}

SolveStats implicit_step_dense(const Params& p, const Space& s, const DenseForce& f, const StepConfig& cfg,
                               std::span<const double> prev, std::span<double> next) {
    auto field = [&](std::span<const double> u, std::span<double> out) { return eval_field(p, s, f, u, out); };
    if (cfg.solver == InnerSolver::newton) {
        auto jac = [&](std::span<const double> u, std::span<double> lo, std::span<double> di, std::span<double> up) {
            field_jacobian(p, s, u, lo, di, up);
        };
        return newton_solve(field, jac, cfg.eps, prev, next, cfg.fp_tol, cfg.max_iter);
    }
    return picard_solve(field, cfg.eps, prev, next, cfg.fp_tol, cfg.max_iter);
}

namespace {

StepResult step_with(const Params& p, const DerivedConstants& dc, const StepConfig& cfg, const DenseForce& f,
                     const LatticeWindow& u_prev) {
    const Space s = Space::window(cfg.max_half_width);
    const Index k = cfg.max_half_width;
    std::vector<double> prev = u_prev.dense(-k, k);
    std::vector<double> next(prev.size());

    StepReport rep;
    const double full = norm(u_prev);
    rep.started_outside_ball = full > dc.r_star;
    if (rep.started_outside_ball) note_warning(Warning::outside_absorbing_ball);

    const double kept = norm(prev);
    const SolveStats st = implicit_step_dense(p, s, f, cfg, prev, next);
    rep.iterations = st.iterations;
    rep.residual = st.residual;
    rep.clipped_mass = st.clipped_mass + std::max(0.0, full * full - kept * kept);
    if (rep.clipped_mass > kClipWarnThreshold) note_warning(Warning::tail_clipped);
    return {LatticeWindow(-k, std::move(next)).normalized(), rep};
}

} // namespace

StepResult implicit_step_detailed(const Params& p, const StepConfig& cfg, const LatticeWindow& u_prev) {
    const DerivedConstants dc = derived_constants(p);
    validate(cfg, dc);
    return step_with(p, dc, cfg, DenseForce::make(p.f, Space::window(cfg.max_half_width)), u_prev);
}

LatticeWindow implicit_step(const Params& p, const StepConfig& cfg, const LatticeWindow& u_prev) {
    return implicit_step_detailed(p, cfg, u_prev).state;
}

Trajectory run_trajectory(const Params& p, const StepConfig& cfg, const LatticeWindow& u0, std::size_t n_steps) {
    const DerivedConstants dc = derived_constants(p);
    validate(cfg, dc);
    const DenseForce f = DenseForce::make(p.f, Space::window(cfg.max_half_width));
    Trajectory tr;
    tr.eps = cfg.eps;
    tr.params_hash = params_hash(p);
    tr.states.reserve(n_steps + 1);
    tr.reports.reserve(n_steps);
    tr.states.push_back(u0);
    for (std::size_t n = 0; n < n_steps; ++n) {
        try {
            StepResult r = step_with(p, dc, cfg, f, tr.states.back());
            tr.states.push_back(std::move(r.state));
            tr.reports.push_back(r.report);
        } catch (NumericalFailure& e) {
            e.step_index = n + 1;
            throw;
        }
    }
    return tr;
}

std::uint64_t params_hash(const Params& p) {
    std::string s;
    char buf[64];
    for (double v : {p.nu, p.alpha, p.beta, p.gamma, p.lambda}) {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        s += buf;
    }
    s += p.laplacian_sign == LaplacianSign::positive ? "positive;" : "continuum;";
    const LatticeWindow f = p.f.normalized();
    s += std::to_string(f.offset()) + ":";
    for (double v : f.values()) {
        std::snprintf(buf, sizeof buf, "%.17g,", v);
        s += buf;
    }
    return fnv1a64(s);
}

std::size_t steps_in(double t, double h) {
    if (!(h > 0.0) || t < 0.0) throw ConfigError("steps_in: need t >= 0 and h > 0");
    const double q = t / h;
    const double n = std::round(q);
    if (std::abs(q - n) > 1e-9 * std::max(1.0, q)) {
        throw ConfigError("time " + std::to_string(t) + " is not a multiple of step " + std::to_string(h));
    }
    return static_cast<std::size_t>(n);
}

double reference_flow_dense(const Params& p, const Space& s, const DenseForce& f, std::span<double> u, double t,
                            double dt_ref) {
    const std::size_t n = steps_in(t, dt_ref);
    Rk4Workspace ws(u.size());
    auto field = [&](double, std::span<const double> x, std::span<double> out) { return eval_field(p, s, f, x, out); };
    double clip = 0.0;
    for (std::size_t k = 0; k < n; ++k) clip = std::max(clip, rk4_step(field, 0.0, dt_ref, u, ws));
    return clip;
}

LatticeWindow reference_flow(const Params& p, const LatticeWindow& u0, double t, double dt_ref,
                             Index max_half_width) {
    if (!(dt_ref > 0.0)) throw ConfigError("dt_ref must be positive");
    if (t == 0.0) return u0;
    const Space s = Space::window(max_half_width);
    std::vector<double> u = u0.dense(-max_half_width, max_half_width);
    const double clip = reference_flow_dense(p, s, DenseForce::make(p.f, s), u, t, dt_ref);
    if (clip > kClipWarnThreshold) note_warning(Warning::tail_clipped);
    return LatticeWindow(-max_half_width, std::move(u)).normalized();
}

double local_error(const Params& p, double eps, const LatticeWindow& y, double dt_ref, StepConfig base) {
    base.eps = eps;
    const LatticeWindow flow = reference_flow(p, y, eps, dt_ref, base.max_half_width);
    const LatticeWindow step = implicit_step(p, base, y);
    return norm(flow - step);
}

double global_error(const Params& p, double eps, const LatticeWindow& y, double T, double dt_ref, StepConfig base) {
    base.eps = eps;
    const std::size_t n = steps_in(T, eps);
    const Trajectory tr = run_trajectory(p, base, y, n);
    const LatticeWindow flow = reference_flow(p, y, T, dt_ref, base.max_half_width);
    return norm(flow - tr.states.back());
}

} // namespace bhl
