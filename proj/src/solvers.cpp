#include "bhl/solvers.hpp"

namespace bhl {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
    const std::size_t n = rhs.size();
    std::vector<double> c(n);
    double denom = diag[0];
    c[0] = n > 1 ? upper[0] / denom : 0.0;
    rhs[0] /= denom;
    for (std::size_t j = 1; j < n; ++j) {
        denom = diag[j] - lower[j] * c[j - 1];
        c[j] = j + 1 < n ? upper[j] / denom : 0.0;
        rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / denom;
    }
    for (std::size_t j = n - 1; j-- > 0;) rhs[j] -= c[j] * rhs[j + 1];
}

} // namespace bhl
