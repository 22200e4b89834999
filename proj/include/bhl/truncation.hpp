#pragma once

#include "bhl/implicit_euler.hpp"
#include "bhl/lattice.hpp"
#include "bhl/params.hpp"

#include <vector>

namespace bhl {

/// A state of the (2m+1)-dimensional Dirichlet-truncated system, components
/// indexed i = -m..m.
class TruncatedState {
public:
    TruncatedState(Index m, std::vector<double> values);
    static TruncatedState zero(Index m);

    Index m() const noexcept { return m_; }
    std::size_t dim() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double at(Index i) const { return values_.at(static_cast<std::size_t>(i + m_)); }

    friend bool operator==(const TruncatedState&, const TruncatedState&) = default;

private:
    Index m_;
    std::vector<double> values_;
};

double norm(const TruncatedState& x);

// Matrix actions with u_{-m-1} = u_{m+1} = 0:
//   D-_m lower bidiagonal (-1 on the diagonal, +1 below),
//   D+_m upper bidiagonal (-1 on the diagonal, +1 above),
//   L_m = D+_m D-_m, tridiagonal (2, ..., 2, 1) with -1 off the diagonal.
TruncatedState d_minus_m(const TruncatedState& x);
TruncatedState d_plus_m(const TruncatedState& x);
TruncatedState laplacian_m(const TruncatedState& x, LaplacianSign sign = LaplacianSign::positive);

/// F_m x with f^m = (f_i)_{|i| <= m}.
TruncatedState truncated_field(const Params& p, const TruncatedState& x);

struct TruncatedStepResult {
    TruncatedState state;
    StepReport report;
};

/// One implicit Euler step of the truncated system. cfg.max_half_width is ignored.
TruncatedStepResult truncated_step_detailed(const Params& p, const StepConfig& cfg, const TruncatedState& x);
TruncatedState truncated_step(const Params& p, const StepConfig& cfg, const TruncatedState& x);

/// x_0..x_n.
std::vector<TruncatedState> truncated_trajectory(const Params& p, const StepConfig& cfg, const TruncatedState& x0,
                                                 std::size_t n);

/// Zero padding outside [-m, m].
LatticeWindow null_expansion(const TruncatedState& x);

/// Components -m..m of u.
TruncatedState restriction(const LatticeWindow& u, Index m);

} // namespace bhl
