#pragma once

#include "bhl/lattice.hpp"

#include <cstdint>

namespace bhl {

/// Model coefficients of the Burgers-Huxley lattice system
///
///   du/dt = nu L u - alpha u (D- u) + beta u (1 - u)(u - gamma) - lambda u + f
///
/// with all products componentwise.
struct Params {
    double nu = 1.0;     ///< diffusion
    double alpha = 1.0;  ///< advection
    double beta = 1.0;   ///< reaction
    double gamma = 0.5;  ///< threshold, in (0, 1)
    double lambda = 8.0; ///< damping
    LatticeWindow f;     ///< external force
    LaplacianSign laplacian_sign = LaplacianSign::positive;
};

/// Throws ConfigError unless nu, alpha, beta > 0 and gamma in (0, 1).
/// Does not check lambda against lambda_star; see derived_constants.
void validate(const Params& p);

/// 4 nu + (2 alpha + beta + beta gamma)^2 / (4 beta) - beta gamma.
/// Independent of lambda and f.
double lambda_star(const Params& p);

/// Bound on ||F u|| over the ball of radius r.
double m_bound(const Params& p, double r);

/// Lipschitz constant of F over the ball of radius r.
double l_bound(const Params& p, double r);

struct DerivedConstants {
    double lambda_star = 0.0;
    double r_star = 0.0;   ///< radius of the absorbing ball
    double eps_star = 0.0; ///< time-step cap
    double force_norm = 0.0;
    Params params;

    double gap() const noexcept { return params.lambda - lambda_star; }
    double m_of_r(double r) const { return m_bound(params, r); }
    double l_of_r(double r) const { return l_bound(params, r); }
};

/// Throws DissipativityViolation if lambda <= lambda_star.
DerivedConstants derived_constants(const Params& p);

/// C^1 cut-off xi(|i| / k): 0 for s <= 1, 1 for s >= 2, cubic smoothstep between.
double cutoff_xi(std::int64_t k, Index i);

/// sup |xi'| for the smoothstep cut-off.
constexpr double cutoff_c1() noexcept { return 1.5; }

/// sum_i xi_{k,i} u_i^2.
double tail_mass(const LatticeWindow& u, std::int64_t k);

/// Dense variant over components indexed from `first_index`.
double tail_mass(std::span<const double> u, Index first_index, std::int64_t k);

/// The vector field F u, evaluated term by term as written above.
/// Support grows by one index on each side, joined with the support of f.
LatticeWindow vector_field(const Params& p, const LatticeWindow& u);

} // namespace bhl
