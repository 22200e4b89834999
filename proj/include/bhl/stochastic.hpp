#pragma once

// Multiplicative-noise variant of the lattice system.
//
// The noise intensity is called sigma throughout (the time step is eps).
// Paths of the stationary Ornstein-Uhlenbeck process dz + z dt = dW are
// sampled exactly on a grid, and the pathwise transformed system
//
//   dU/dt = nu L U - alpha e^{sz} U D-U - beta e^{2sz} U^3
//           + beta (1+gamma) e^{sz} U^2 - beta gamma U - lambda U + e^{-sz} f + s z U
//
// is integrated with z = z(t) interpolated linearly between grid nodes.

#include "bhl/attractor.hpp"
#include "bhl/cloud.hpp"
#include "bhl/lattice.hpp"
#include "bhl/params.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace bhl {

struct OUPath {
    double t_min = 0.0;
    double t_max = 0.0;
    double h_path = 0.0;
    std::vector<double> z; ///< z[j] at t_min + j h_path
    std::uint64_t seed = 0;

    double time(std::size_t j) const noexcept { return t_min + static_cast<double>(j) * h_path; }

    /// Linear interpolation; throws ConfigError outside [t_min, t_max].
    double at(double t) const;

    friend bool operator==(const OUPath&, const OUPath&) = default;
};

/// One-step decay factor e^{-h} of the exact discretization.
double ou_decay(double h);
/// Innovation standard deviation sqrt((1 - e^{-2h}) / 2).
double ou_innovation_sd(double h);
/// Stationary variance of z.
constexpr double ou_stationary_variance() noexcept { return 0.5; }

/// Exact sample of the stationary process on the grid t_min + j h.
/// Generated backwards from t_max, so extending t_min keeps the existing
/// values for the same (seed, t_max, h).
OUPath ou_path(std::uint64_t seed, double t_min, double t_max, double h);

/// Trapezoidal time average of z; the horizon must be at least 100.
double ergodic_average(const OUPath& path);

/// The transformed random field at OU value z. Support grows like vector_field.
LatticeWindow random_field(const Params& p, double sigma, double z, const LatticeWindow& u);

/// Directional derivative of random_field at u in direction v.
LatticeWindow random_field_jvp(const Params& p, double sigma, double z, const LatticeWindow& u,
                               const LatticeWindow& v);

enum class PathIntegrator { rk4, implicit_euler };

struct NoiseConfig {
    double sigma = 0.0;
    double h_path = 0.001;
    double pullback_T = 16.0;
    std::size_t realizations = 20;
    std::uint64_t master_seed = 7;
    PathIntegrator integrator = PathIntegrator::rk4;
    double dt = 0.0;         ///< 0 selects min(eps_star / 10, h_path)
    double quad_tol = 1e-6;  ///< for absorbing_radius
};

void validate(const NoiseConfig& cfg);

/// Seed of the path used by realization i.
std::uint64_t realization_seed(const NoiseConfig& cfg, std::size_t i);

/// The integrator step actually used for cfg under p.
double pullback_dt(const Params& p, const NoiseConfig& cfg);

/// Evolves the cloud from -pullback_T to 0 along realization i's path.
/// dt must divide pullback_T and not exceed eps_star. The returned cloud
/// samples the random attractor at time 0.
PointCloud pullback_sample(const Params& p, const NoiseConfig& cfg, std::size_t realization_index, double dt,
                           const PointCloud& initial);

/// Same, on a given path covering [-pullback_T, 0].
PointCloud pullback_sample_on(const Params& p, const NoiseConfig& cfg, const OUPath& path, double dt,
                              const PointCloud& initial);

struct AbsorbingRadius {
    double value = 1.0;
    double tail_estimate = 0.0; ///< estimate of the integral beyond the path, same units as value
    double horizon = 0.0;       ///< quadrature range [-horizon, 0]
};

/// R = 1 + |f|^2/(lambda - lambda_star) * int_{-inf}^0 exp(-2 s z(s) - int_0^s 2 s z dr + (lambda - lambda_star) s) ds
/// with s the noise intensity inside the exponent. Trapezoidal over the path
/// grid from t_min to 0. Throws HorizonTooShort unless the path reaches back
/// to ln(1/quad_tol)/(lambda - lambda_star).
AbsorbingRadius absorbing_radius(const Params& p, double sigma, const OUPath& path, double quad_tol);

/// Backward horizon needed by absorbing_radius.
double absorbing_horizon(const Params& p, double quad_tol);

std::string ou_path_to_json(const OUPath& path);
OUPath ou_path_from_json(const std::string& text);
void save_ou_path(const OUPath& path, const std::filesystem::path& file);
OUPath load_ou_path(const std::filesystem::path& file);

} // namespace bhl
