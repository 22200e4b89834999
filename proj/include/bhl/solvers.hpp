#pragma once

// Dense time-stepping primitives shared by the lattice, truncated and random
// systems. Field callables evaluate out = G(u) and return the clipped squared
// mass (0 for closed spaces).

#include "bhl/error.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace bhl {

struct SolveStats {
    int iterations = 0;        ///< field evaluations used
    double residual = 0.0;     ///< ||y - prev - eps G(y)|| of the returned y
    double clipped_mass = 0.0; ///< squared mass dropped at the window edge
};

/// Solves y = prev + eps G(y) by iterating the contraction y <- prev + eps G(y)
/// from y_0 = prev. The returned iterate is the last one whose residual is
/// known exactly (the distance to its own image), so residual <= tol holds
/// for the result itself.
template <class Field>
SolveStats picard_solve(Field&& field, double eps, std::span<const double> prev, std::span<double> y,
                        double tol, int max_iter) {
    const std::size_t n = prev.size();
    std::vector<double> g(n);
    std::copy(prev.begin(), prev.end(), y.begin());
    SolveStats st;
    for (int k = 1; k <= max_iter; ++k) {
        const double clipped = field(std::span<const double>(y.data(), n), std::span<double>(g));
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double next = prev[j] + eps * g[j];
            const double d = next - y[j];
            acc += d * d;
            g[j] = next;
        }
        const double res = std::sqrt(acc);
        if (!std::isfinite(res)) throw NonFinite("fixed-point iteration produced a non-finite value");
        st.iterations = k;
        st.residual = res;
        st.clipped_mass = eps * eps * clipped;
        if (res <= tol) return st;
        std::copy(g.begin(), g.end(), y.begin());
    }
    throw NoConvergence(max_iter, st.residual);
}

/// Thomas algorithm for a tridiagonal system; overwrites rhs with the solution.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

/// Newton iteration on y - prev - eps G(y) = 0 with a tridiagonal Jacobian
/// supplied by jac(y, lower, diag, upper). Not covered by the contraction
/// guarantee; intended for steps beyond eps_star.
template <class Field, class Jacobian>
SolveStats newton_solve(Field&& field, Jacobian&& jac, double eps, std::span<const double> prev,
                        std::span<double> y, double tol, int max_iter) {
    const std::size_t n = prev.size();
    std::vector<double> g(n), lo(n), di(n), up(n);
    std::copy(prev.begin(), prev.end(), y.begin());
    SolveStats st;
    for (int k = 1; k <= max_iter; ++k) {
        const double clipped = field(std::span<const double>(y.data(), n), std::span<double>(g));
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            g[j] = y[j] - prev[j] - eps * g[j];
            acc += g[j] * g[j];
        }
        const double res = std::sqrt(acc);
        if (!std::isfinite(res)) throw NonFinite("Newton iteration produced a non-finite value");
        st.iterations = k;
        st.residual = res;
        st.clipped_mass = eps * eps * clipped;
        if (res <= tol) return st;
        jac(std::span<const double>(y.data(), n), std::span<double>(lo), std::span<double>(di),
            std::span<double>(up));
        for (std::size_t j = 0; j < n; ++j) {
            lo[j] = -eps * lo[j];
            di[j] = 1.0 - eps * di[j];
            up[j] = -eps * up[j];
        }
        solve_tridiagonal(lo, di, up, g);
        for (std::size_t j = 0; j < n; ++j) y[j] -= g[j];
    }
    throw NoConvergence(max_iter, st.residual);
}

/// Scratch for rk4_step.
struct Rk4Workspace {
    explicit Rk4Workspace(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
    std::vector<double> k1, k2, k3, k4, tmp;
};

/// One classical fourth-order Runge-Kutta step of du/dt = G(t, u), in place.
/// Field signature: double(double t, span<const double> u, span<double> out).
/// Returns the clipped squared mass estimate dt^2 * max stage clip.
template <class Field>
double rk4_step(Field&& field, double t, double dt, std::span<double> u, Rk4Workspace& ws) {
    const std::size_t n = u.size();
    auto cspan = [n](const std::vector<double>& v) { return std::span<const double>(v.data(), n); };
    double clip = field(t, std::span<const double>(u.data(), n), std::span<double>(ws.k1));
    for (std::size_t j = 0; j < n; ++j) ws.tmp[j] = u[j] + 0.5 * dt * ws.k1[j];
    clip = std::max(clip, field(t + 0.5 * dt, cspan(ws.tmp), std::span<double>(ws.k2)));
    for (std::size_t j = 0; j < n; ++j) ws.tmp[j] = u[j] + 0.5 * dt * ws.k2[j];
    clip = std::max(clip, field(t + 0.5 * dt, cspan(ws.tmp), std::span<double>(ws.k3)));
    for (std::size_t j = 0; j < n; ++j) ws.tmp[j] = u[j] + dt * ws.k3[j];
    clip = std::max(clip, field(t + dt, cspan(ws.tmp), std::span<double>(ws.k4)));
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        u[j] += dt / 6.0 * (ws.k1[j] + 2.0 * ws.k2[j] + 2.0 * ws.k3[j] + ws.k4[j]);
        acc += u[j] * u[j];
    }
    if (!std::isfinite(acc)) throw NonFinite("Runge-Kutta step overflowed; reduce the step");
    return dt * dt * clip;
}

} // namespace bhl
