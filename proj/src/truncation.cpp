#include "bhl/truncation.hpp"

#include "bhl/dense_field.hpp"
#include "bhl/diagnostics.hpp"
#include "bhl/error.hpp"

#include <cmath>

namespace bhl {

TruncatedState::TruncatedState(Index m, std::vector<double> values) : m_(m), values_(std::move(values)) {
    if (m < 1) throw ConfigError("truncation half-width m must be positive");
    if (values_.size() != static_cast<std::size_t>(2 * m + 1)) {
        throw ConfigError("TruncatedState: expected 2m+1 components");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw NonFinite("TruncatedState: non-finite component");
    }
}

TruncatedState TruncatedState::zero(Index m) {
    return TruncatedState(m, std::vector<double>(static_cast<std::size_t>(2 * m + 1), 0.0));
}

double norm(const TruncatedState& x) { return norm(x.values()); }

TruncatedState d_minus_m(const TruncatedState& x) {
    auto v = x.values();
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = (j > 0 ? v[j - 1] : 0.0) - v[j];
    return TruncatedState(x.m(), std::move(out));
}

TruncatedState d_plus_m(const TruncatedState& x) {
    auto v = x.values();
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = (j + 1 < v.size() ? v[j + 1] : 0.0) - v[j];
    return TruncatedState(x.m(), std::move(out));
}

TruncatedState laplacian_m(const TruncatedState& x, LaplacianSign sign) {
    const double s = sign == LaplacianSign::positive ? 1.0 : -1.0;
    auto v = x.values();
    const std::size_t n = v.size();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double um = j > 0 ? v[j - 1] : 0.0;
        const double up = j + 1 < n ? v[j + 1] : 0.0;
        const double diag = j + 1 < n ? 2.0 : 1.0;
        out[j] = s * (-um + diag * v[j] - up);
    }
    return TruncatedState(x.m(), std::move(out));
}

TruncatedState truncated_field(const Params& p, const TruncatedState& x) {
    const Space s = Space::truncated(x.m());
    std::vector<double> out(x.dim());
    eval_field(p, s, DenseForce::make(p.f, s), x.values(), out);
    return TruncatedState(x.m(), std::move(out));
}

namespace {

TruncatedStepResult step_with(const Params& p, const DerivedConstants& dc, const StepConfig& cfg,
                              const DenseForce& f, const TruncatedState& x) {
    const Space s = Space::truncated(x.m());
    std::vector<double> next(x.dim());
    StepReport rep;
    rep.started_outside_ball = norm(x) > dc.r_star;
    if (rep.started_outside_ball) note_warning(Warning::outside_absorbing_ball);
    const SolveStats st = implicit_step_dense(p, s, f, cfg, x.values(), next);
    rep.iterations = st.iterations;
    rep.residual = st.residual;
    return {TruncatedState(x.m(), std::move(next)), rep};
}

} // namespace

TruncatedStepResult truncated_step_detailed(const Params& p, const StepConfig& cfg, const TruncatedState& x) {
    const DerivedConstants dc = derived_constants(p);
    validate(cfg, dc);
    return step_with(p, dc, cfg, DenseForce::make(p.f, Space::truncated(x.m())), x);
}

TruncatedState truncated_step(const Params& p, const StepConfig& cfg, const TruncatedState& x) {
    return truncated_step_detailed(p, cfg, x).state;
}

std::vector<TruncatedState> truncated_trajectory(const Params& p, const StepConfig& cfg, const TruncatedState& x0,
                                                 std::size_t n) {
    const DerivedConstants dc = derived_constants(p);
    validate(cfg, dc);
    const DenseForce f = DenseForce::make(p.f, Space::truncated(x0.m()));
    std::vector<TruncatedState> out;
    out.reserve(n + 1);
    out.push_back(x0);
    for (std::size_t k = 0; k < n; ++k) {
        try {
            out.push_back(step_with(p, dc, cfg, f, out.back()).state);
        } catch (NumericalFailure& e) {
            e.step_index = k + 1;
            throw;
        }
    }
    return out;
}

LatticeWindow null_expansion(const TruncatedState& x) {
    return LatticeWindow(-x.m(), std::vector<double>(x.values().begin(), x.values().end()));
}

TruncatedState restriction(const LatticeWindow& u, Index m) { return TruncatedState(m, u.dense(-m, m)); }

} // namespace bhl
