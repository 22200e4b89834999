#include "bhl/error.hpp"
#include "bhl/stochastic.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace bhl;

namespace {

Params forced() {
    Params p;
    p.f = LatticeWindow::unit(0, 0.08984375);
    return p;
}

LatticeWindow random_state(std::mt19937_64& rng, double radius, Index k) {
    std::normal_distribution<double> g;
    std::vector<double> v(static_cast<std::size_t>(2 * k + 1));
    for (double& x : v) x = g(rng);
    LatticeWindow u(-k, v);
    return (radius / norm(u)) * u;
}

} // namespace

TEST_CASE("exact OU step coefficients") {
    CHECK(ou_decay(std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ou_innovation_sd(std::log(2.0)) == doctest::Approx(std::sqrt(0.375)).epsilon(1e-15));
    // Small h: variance ~ h, computed without cancellation.
    CHECK(ou_innovation_sd(1e-12) == doctest::Approx(1e-6).epsilon(1e-9));
    // Stationarity: a^2 * 1/2 + sd^2 = 1/2.
    for (double h : {0.001, 0.1, 2.0})
        CHECK(ou_decay(h) * ou_decay(h) * 0.5 + ou_innovation_sd(h) * ou_innovation_sd(h) ==
              doctest::Approx(ou_stationary_variance()).epsilon(1e-14));
}

TEST_CASE("OU path grid and reproducibility") {
    const OUPath a = ou_path(5, -1.0, 0.0, 0.1);
    CHECK(a.z.size() == 11);
    CHECK(a.t_min == doctest::Approx(-1.0));
    CHECK(a.time(10) == doctest::Approx(0.0));
    CHECK(ou_path(5, -1.0, 0.0, 0.1) == a);
    CHECK(!(ou_path(6, -1.0, 0.0, 0.1) == a));
    CHECK(a.at(-1.0) == a.z[0]);
    CHECK(a.at(0.0) == a.z[10]);
    CHECK(a.at(-0.95) == doctest::Approx(0.5 * (a.z[0] + a.z[1])).epsilon(1e-12));
    CHECK_THROWS_AS(a.at(0.5), ConfigError);
    CHECK_THROWS_AS(ou_path(1, 0.0, -1.0, 0.1), ConfigError);
}

TEST_CASE("extending a path backwards keeps its values") {
    const OUPath shortp = ou_path(77, -10.0, 0.0, 0.01);
    const OUPath longp = ou_path(77, -40.0, 0.0, 0.01);
    const std::size_t off = longp.z.size() - shortp.z.size();
    for (std::size_t j = 0; j < shortp.z.size(); ++j) CHECK(longp.z[off + j] == shortp.z[j]);
}

TEST_CASE("two-step conditional moments") {
    const double h = 0.05;
    const double a = ou_decay(h);
    const int n = 20000;
    double m1 = 0.0, v1 = 0.0, m2 = 0.0, v2 = 0.0;
    for (int s = 0; s < n; ++s) {
        const OUPath p = ou_path(1000 + static_cast<std::uint64_t>(s), -2.0 * h, 0.0, h);
        const double d1 = p.z[1] - a * p.z[2];
        const double d2 = p.z[0] - a * a * p.z[2];
        m1 += d1;
        v1 += d1 * d1;
        m2 += d2;
        v2 += d2 * d2;
    }
    m1 /= n;
    m2 /= n;
    v1 = v1 / n - m1 * m1;
    v2 = v2 / n - m2 * m2;
    const double s1 = ou_innovation_sd(h) * ou_innovation_sd(h);
    const double s2 = (1.0 - std::pow(a, 4)) / 2.0;
    CHECK(std::abs(m1) <= 4.0 * std::sqrt(s1 / n));
    CHECK(std::abs(m2) <= 4.0 * std::sqrt(s2 / n));
    CHECK(v1 == doctest::Approx(s1).epsilon(0.05));
    CHECK(v2 == doctest::Approx(s2).epsilon(0.05));
}

TEST_CASE("stationary variance of a long path") {
    const OUPath p = ou_path(2, -10000.0, 0.0, 0.1);
    double m = 0.0, v = 0.0;
    for (double z : p.z) {
        m += z;
        v += z * z;
    }
    m /= static_cast<double>(p.z.size());
    v = v / static_cast<double>(p.z.size()) - m * m;
    CHECK(v >= 0.45);
    CHECK(v <= 0.55);
}

TEST_CASE("ergodic average") {
    // Seed 1 at horizon 10^4; the standard deviation of the average is about 0.01.
    const OUPath p = ou_path(1, -10000.0, 0.0, 0.01);
    CHECK(std::abs(ergodic_average(p)) <= 0.05);
    OUPath flat = p;
    for (double& z : flat.z) z = 0.3;
    CHECK(ergodic_average(flat) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK_THROWS_AS(ergodic_average(ou_path(1, -50.0, 0.0, 0.01)), ConfigError);
}

TEST_CASE("random field at zero noise is the deterministic field") {
    const Params p = forced();
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        const LatticeWindow u = random_state(rng, 1.0, 6);
        CHECK(random_field(p, 0.0, 0.7, u) == vector_field(p, u));
    }
    // U = 0 leaves only the transformed force.
    const LatticeWindow at0 = random_field(p, 0.3, 0.5, LatticeWindow());
    CHECK(at0 == std::exp(-0.15) * p.f);
}

TEST_CASE("random field derivative matches central differences") {
    const Params p = forced();
    std::mt19937_64 rng(4);
    for (double sigma : {0.0, 0.2, 0.4}) {
        for (double z : {-1.3, 0.0, 0.8}) {
            const LatticeWindow u = random_state(rng, 1.0, 5);
            const LatticeWindow v = random_state(rng, 1.0, 5);
            const double h = 1e-6;
            const LatticeWindow fd = (0.5 / h) * (random_field(p, sigma, z, u + h * v) - random_field(p, sigma, z, u - h * v));
            const LatticeWindow jv = random_field_jvp(p, sigma, z, u, v);
            CHECK(norm(fd - jv) <= 1e-7 * (1.0 + norm(jv)));
        }
    }
}

TEST_CASE("pullback at zero noise follows the deterministic flow") {
    const Params p = forced();
    NoiseConfig cfg;
    cfg.sigma = 0.0;
    cfg.pullback_T = 2.0;
    const Space s = Space::truncated(6);
    const PointCloud init = sample_ball(1.0, s, 6, 11);
    const double dt = 0.001;
    const PointCloud pb = pullback_sample(p, cfg, 0, dt, init);
    PointCloud det = init;
    evolve(det, reference_flow_stepper(p, s, 2.0, dt), 1);
    for (std::size_t k = 0; k < init.size(); ++k) CHECK(distance(pb.points[k], det.points[k]) <= 1e-9);
    CHECK(pb.meta.sigma == 0.0);
    CHECK(pb.meta.pullback_T == 2.0);
    CHECK(pb.meta.steps_evolved == 2000);
    CHECK(pb.meta.m == 6);
}

TEST_CASE("pullback without force collapses to zero") {
    const Params p;
    NoiseConfig cfg;
    cfg.sigma = 0.0;
    cfg.pullback_T = 16.0;
    const PointCloud pb = pullback_sample(p, cfg, 0, 0.002, sample_ball(1.0, Space::truncated(4), 5, 1));
    CHECK(cloud_norm(pb) <= 1e-6);
}

TEST_CASE("doubling the pullback time changes little") {
    const Params p = forced();
    NoiseConfig cfg;
    cfg.sigma = 0.2;
    const OUPath path = ou_path(realization_seed(cfg, 3), -24.0, 0.0, cfg.h_path);
    const PointCloud init = sample_ball(1.0, Space::truncated(4), 4, 2);
    cfg.pullback_T = 12.0;
    const PointCloud a = pullback_sample_on(p, cfg, path, 0.002, init);
    cfg.pullback_T = 24.0;
    const PointCloud b = pullback_sample_on(p, cfg, path, 0.002, init);
    CHECK(hausdorff_sym(a, b) <= 1e-5);
}

TEST_CASE("implicit path integrator tracks RK4") {
    const Params p = forced();
    NoiseConfig cfg;
    cfg.sigma = 0.2;
    cfg.pullback_T = 4.0;
    const PointCloud init = sample_ball(1.0, Space::truncated(4), 3, 5);
    const PointCloud a = pullback_sample(p, cfg, 1, 0.001, init);
    cfg.integrator = PathIntegrator::implicit_euler;
    const PointCloud b = pullback_sample(p, cfg, 1, 0.001, init);
    CHECK(hausdorff_sym(a, b) <= 1e-3);
}

TEST_CASE("pullback argument checks") {
    const Params p = forced();
    NoiseConfig cfg;
    const PointCloud init = sample_ball(1.0, Space::truncated(2), 2, 5);
    CHECK_THROWS_AS(pullback_sample(p, cfg, 0, 1.0, init), StepTooLarge);
    CHECK_THROWS_AS(pullback_sample(p, cfg, 0, 0.003, init), ConfigError);
    const OUPath shortp = ou_path(1, -1.0, 0.0, cfg.h_path);
    CHECK_THROWS_AS(pullback_sample_on(p, cfg, shortp, 0.001, init), HorizonTooShort);
    CHECK(pullback_dt(p, cfg) == doctest::Approx(0.001));
    const double dt = pullback_dt(p, cfg);
    CHECK(steps_in(cfg.pullback_T, dt) == 16000);
}

TEST_CASE("absorbing radius") {
    const double tol = 1e-6;
    const Params p = forced();
    const double g = derived_constants(p).gap();
    const double f2 = 0.08984375 * 0.08984375;
    const double S = absorbing_horizon(p, tol);
    CHECK(S == doctest::Approx(std::log(1e6) / g));
    const OUPath path = ou_path(8, -std::ceil(S) - 1.0, 0.0, 0.001);

    CHECK(absorbing_radius(Params{}, 0.3, path, tol).value == 1.0);

    const AbsorbingRadius r0 = absorbing_radius(p, 0.0, path, tol);
    CHECK(std::abs(r0.value - (1.0 + f2 / (g * g))) <= 2.0 * tol * f2 / (g * g) + 1e-9);
    CHECK(r0.tail_estimate <= tol * f2 / (g * g));

    // Halving the force quarters the excess over 1.
    Params half = p;
    half.f = 0.5 * p.f;
    const AbsorbingRadius r1 = absorbing_radius(p, 0.2, path, tol);
    const AbsorbingRadius r2 = absorbing_radius(half, 0.2, path, tol);
    CHECK(r2.value - 1.0 == doctest::Approx(0.25 * (r1.value - 1.0)).epsilon(1e-12));

    CHECK_THROWS_AS(absorbing_radius(p, 0.2, ou_path(8, -2.0, 0.0, 0.001), tol), HorizonTooShort);
}

TEST_CASE("OU path JSON round trip") {
    const OUPath p = ou_path(9, -3.0, 0.0, 0.01);
    CHECK(ou_path_from_json(ou_path_to_json(p)) == p);
    const auto file = std::filesystem::temp_directory_path() / "bhl_test_ou.json";
    save_ou_path(p, file);
    CHECK(load_ou_path(file) == p);
    std::filesystem::remove(file);
    CHECK_THROWS_AS(ou_path_from_json(R"({"format":"bhl.cloud","version":1})"), ConfigError);
    CHECK_THROWS_AS(ou_path_from_json("[1,2"), ConfigError);
}
