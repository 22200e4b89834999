#pragma once

// Dense evaluation of the lattice vector fields on a finite Space.
//
// These are the inner kernels of every stepper. A state is a contiguous
// array of length space.dim() holding components -hw..hw. For window
// spaces the field is evaluated on the grown support and whatever lands at
// |i| > hw is dropped; its squared norm is returned so callers can report it.

#include "bhl/params.hpp"
#include "bhl/space.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace bhl {

/// f restricted to a space, plus what the restriction throws away.
struct DenseForce {
    std::vector<double> values;
    double left_ghost = 0.0;  ///< f_{-hw-1}
    double right_ghost = 0.0; ///< f_{hw+1}
    double outer_mass = 0.0;  ///< sum of f_i^2 over |i| > hw + 1

    static DenseForce make(const LatticeWindow& f, const Space& s);
};

namespace detail {

// Applies pointwise(um, ui, up, lap, fi) on every component of the space and
// returns the squared mass that falls outside a window space. `force_scale`
// multiplies the discarded f mass.
template <class Pointwise>
inline double apply_stencil(const Space& s, LaplacianSign sign, const DenseForce& f,
                            std::span<const double> u, std::span<double> out, double force_scale,
                            Pointwise&& pointwise) {
    const std::size_t n = u.size();
    const double sg = sign == LaplacianSign::positive ? 1.0 : -1.0;
    const double* uu = u.data();
    const double* ff = f.values.data();
    double* oo = out.data();

    if (n == 1) {
        const double lap = s.kind == SpaceKind::truncated ? sg * uu[0] : 2.0 * sg * uu[0];
        oo[0] = pointwise(0.0, uu[0], 0.0, lap, ff[0]);
    } else {
        oo[0] = pointwise(0.0, uu[0], uu[1], sg * (2.0 * uu[0] - uu[1]), ff[0]);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double um = uu[j - 1];
            const double ui = uu[j];
            const double up = uu[j + 1];
            oo[j] = pointwise(um, ui, up, sg * (-um + 2.0 * ui - up), ff[j]);
        }
        const double um = uu[n - 2];
        const double ui = uu[n - 1];
        // Last row of the truncated Laplacian is (-1, 1).
        const double lap = s.kind == SpaceKind::truncated ? sg * (-um + ui) : sg * (-um + 2.0 * ui);
        oo[n - 1] = pointwise(um, ui, 0.0, lap, ff[n - 1]);
    }

    if (s.kind == SpaceKind::truncated) return 0.0;
    const double left = pointwise(0.0, 0.0, uu[0], -sg * uu[0], f.left_ghost);
    const double right = pointwise(uu[n - 1], 0.0, 0.0, -sg * uu[n - 1], f.right_ghost);
    return left * left + right * right + f.outer_mass * force_scale * force_scale;
}

} // namespace detail

/// out = F u on the space; returns the clipped squared mass.
inline double eval_field(const Params& p, const Space& s, const DenseForce& f,
                         std::span<const double> u, std::span<double> out) {
    const double nu = p.nu, alpha = p.alpha, beta = p.beta, gamma = p.gamma, lambda = p.lambda;
    return detail::apply_stencil(
        s, p.laplacian_sign, f, u, out, 1.0, [=](double um, double ui, double, double lap, double fi) {
            const double adv = ui * (um - ui);
            const double react = ui * (1.0 - ui) * (ui - gamma);
            return nu * lap - alpha * adv + beta * react - lambda * ui + fi;
        });
}

/// The transformed random field for noise intensity sigma at OU value z:
///   nu L U - alpha e^{sz} U D-U - beta e^{2sz} U^3 + beta (1+gamma) e^{sz} U^2
///   - beta gamma U - lambda U + e^{-sz} f + s z U
inline double eval_random_field(const Params& p, double sigma, double z, const Space& s,
                                const DenseForce& f, std::span<const double> u, std::span<double> out) {
    const double e1 = std::exp(sigma * z);
    const double em = std::exp(-sigma * z);
    const double sz = sigma * z;
    const double nu = p.nu, alpha = p.alpha, beta = p.beta, gamma = p.gamma, lambda = p.lambda;
    return detail::apply_stencil(
        s, p.laplacian_sign, f, u, out, em, [=](double um, double ui, double, double lap, double fi) {
            // Factored so that sigma = 0 reproduces eval_field bit for bit.
            const double react = ui * (1.0 - e1 * ui) * (e1 * ui - gamma);
            return nu * lap - alpha * (e1 * (ui * (um - ui))) + beta * react - lambda * ui + em * fi + sz * ui;
        });
}

/// Tridiagonal Jacobian of the deterministic field at u:
/// lower[j] = dF_j/du_{j-1}, diag[j] = dF_j/du_j, upper[j] = dF_j/du_{j+1}.
void field_jacobian(const Params& p, const Space& s, std::span<const double> u, std::span<double> lower,
                    std::span<double> diag, std::span<double> upper);

} // namespace bhl
