#include "bhl/dense_field.hpp"

namespace bhl {

std::string to_string(const Space& s) {
    return (s.kind == SpaceKind::window ? "window(K=" : "truncated(m=") + std::to_string(s.half_width) + ")";
}

DenseForce DenseForce::make(const LatticeWindow& f, const Space& s) {
    DenseForce out;
    const Index hw = s.half_width;
    out.values = f.dense(-hw, hw);
    if (s.kind == SpaceKind::window) {
        out.left_ghost = f.at(-hw - 1);
        out.right_ghost = f.at(hw + 1);
        double outer = 0.0;
        for (Index i = f.offset(); i <= f.last(); ++i) {
            if (i < -hw - 1 || i > hw + 1) outer += f.at(i) * f.at(i);
        }
        out.outer_mass = outer;
    }
    return out;
}

void field_jacobian(const Params& p, const Space& s, std::span<const double> u, std::span<double> lower,
                    std::span<double> diag, std::span<double> upper) {
    const std::size_t n = u.size();
    const double sg = p.laplacian_sign == LaplacianSign::positive ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double ui = u[j];
        const double um = j > 0 ? u[j - 1] : 0.0;
        const bool last_truncated = s.kind == SpaceKind::truncated && j + 1 == n;
        const double lap_diag = last_truncated ? sg : 2.0 * sg;
        const double react_prime = -3.0 * ui * ui + 2.0 * (1.0 + p.gamma) * ui - p.gamma;
        diag[j] = p.nu * lap_diag - p.alpha * (um - 2.0 * ui) + p.beta * react_prime - p.lambda;
        lower[j] = j > 0 ? -p.nu * sg - p.alpha * ui : 0.0;
        upper[j] = j + 1 < n ? -p.nu * sg : 0.0;
    }
}

} // namespace bhl
