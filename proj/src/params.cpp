#include "bhl/params.hpp"

#include "bhl/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bhl {

DissipativityViolation::DissipativityViolation(double lambda_, double lambda_star_)
    : ConfigError("lambda = " + std::to_string(lambda_) + " must exceed lambda_star = " +
                  std::to_string(lambda_star_)),
      lambda(lambda_), lambda_star(lambda_star_) {}

StepTooLarge::StepTooLarge(double eps_, double eps_star_)
    : ConfigError("time step " + std::to_string(eps_) + " exceeds eps_star = " +
                  std::to_string(eps_star_)),
      eps(eps_), eps_star(eps_star_) {}

HorizonTooShort::HorizonTooShort(double required_, double available_)
    : Error("path horizon " + std::to_string(available_) + " shorter than required " +
            std::to_string(required_)),
      required(required_), available(available_) {}

NoConvergence::NoConvergence(int iterations_, double residual_)
    : NumericalFailure("fixed-point solve did not converge after " + std::to_string(iterations_) +
                       " iterations (residual " + std::to_string(residual_) + ")"),
      iterations(iterations_), residual(residual_) {}

void validate(const Params& p) {
    if (!(p.nu > 0.0)) throw ConfigError("nu must be positive");
    if (!(p.alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(p.beta > 0.0)) throw ConfigError("beta must be positive");
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw ConfigError("gamma must lie in (0, 1)");
    if (!std::isfinite(p.lambda)) throw ConfigError("lambda must be finite");
}

double lambda_star(const Params& p) {
    if (!(p.beta > 0.0)) throw ConfigError("lambda_star requires beta > 0");
    const double c = 2.0 * p.alpha + p.beta + p.beta * p.gamma;
    return 4.0 * p.nu + c * c / (4.0 * p.beta) - p.beta * p.gamma;
}

double m_bound(const Params& p, double r) {
    const double c2 = 2.0 * p.alpha + p.beta + p.beta * p.gamma;
    const double c1 = 4.0 * p.nu + p.beta * p.gamma + p.lambda;
    return p.beta * r * r * r + c2 * r * r + c1 * r + norm(p.f);
}

double l_bound(const Params& p, double r) {
    const double g1 = 1.0 + p.gamma;
    const double root = std::sqrt(12.0 * r * r * g1 * g1 + 27.0 * r * r * r * r + 3.0 * p.gamma * p.gamma);
    return 4.0 * p.nu + 2.0 * std::sqrt(5.0) * r * p.alpha + root * p.beta + p.lambda;
}

DerivedConstants derived_constants(const Params& p) {
    validate(p);
    DerivedConstants dc;
    dc.params = p;
    dc.lambda_star = lambda_star(p);
    if (!(p.lambda > dc.lambda_star)) throw DissipativityViolation(p.lambda, dc.lambda_star);
    dc.force_norm = norm(p.f);
    dc.r_star = 1.0 + dc.force_norm / (p.lambda - dc.lambda_star);
    const double r1 = dc.r_star + 1.0;
    dc.eps_star = std::min(1.0 / m_bound(p, r1), 1.0 / (1.0 + l_bound(p, r1)));
    return dc;
}

double cutoff_xi(std::int64_t k, Index i) {
    const double s = static_cast<double>(i < 0 ? -i : i) / static_cast<double>(k);
    if (s <= 1.0) return 0.0;
    if (s >= 2.0) return 1.0;
    const double w = s - 1.0;
    return 3.0 * w * w - 2.0 * w * w * w;
}

double tail_mass(std::span<const double> u, Index first_index, std::int64_t k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const Index i = first_index + static_cast<Index>(j);
        if (u[j] != 0.0) acc += cutoff_xi(k, i) * u[j] * u[j];
    }
    return acc;
}

double tail_mass(const LatticeWindow& u, std::int64_t k) {
    return tail_mass(u.values(), u.offset(), k);
}

LatticeWindow vector_field(const Params& p, const LatticeWindow& u) {
    Index lo = u.offset() - 1;
    Index hi = u.last() + 1;
    if (u.size() == 0) {
        lo = p.f.offset();
        hi = p.f.last();
    } else if (p.f.size() != 0) {
        lo = std::min(lo, p.f.offset());
        hi = std::max(hi, p.f.last());
    }
    if (hi < lo) return {};
    const double s = p.laplacian_sign == LaplacianSign::positive ? 1.0 : -1.0;
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (Index i = lo; i <= hi; ++i) {
        const double um = u.at(i - 1);
        const double ui = u.at(i);
        const double up = u.at(i + 1);
        const double lap = s * (-um + 2.0 * ui - up);
        const double adv = ui * (um - ui);
        const double react = ui * (1.0 - ui) * (ui - p.gamma);
        out[static_cast<std::size_t>(i - lo)] =
            p.nu * lap - p.alpha * adv + p.beta * react - p.lambda * ui + p.f.at(i);
    }
    return LatticeWindow(lo, std::move(out));
}

} // namespace bhl
