#include "bhl/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace bhl::kernels;

namespace {

std::vector<Point> random_cloud(std::mt19937_64& rng, std::size_t count, std::size_t dim, double spread) {
    std::normal_distribution<double> g(0.0, spread);
    std::vector<Point> c(count, Point(dim));
    for (auto& p : c)
        for (double& x : p) x = g(rng);
    return c;
}

// Textbook definition: sqrt taken per pair.
double naive_semi(const std::vector<Point>& a, const std::vector<Point>& b) {
    double worst = 0.0;
    for (const auto& x : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& y : b) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
            best = std::min(best, std::sqrt(s));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

TEST_CASE("semi-distance kernels agree bitwise") {
    std::mt19937_64 rng(1);
    for (std::size_t na : {1u, 2u, 17u, 64u}) {
        for (std::size_t nb : {1u, 5u, 64u}) {
            const auto a = random_cloud(rng, na, 33, 1.0);
            const auto b = random_cloud(rng, nb, 33, 0.5);
            const double s = semi_hausdorff_serial(a, b);
            CHECK(semi_hausdorff_parallel(a, b) == s);
            CHECK(semi_hausdorff_pruned(a, b) == s);
            CHECK(s == doctest::Approx(naive_semi(a, b)).epsilon(1e-14));
        }
    }
}

TEST_CASE("pruning survives clustered and duplicated points") {
    std::mt19937_64 rng(2);
    auto a = random_cloud(rng, 40, 9, 1e-3);
    auto b = a;
    b.insert(b.end(), a.begin(), a.end());
    CHECK(semi_hausdorff_pruned(a, b) == 0.0);
    CHECK(semi_hausdorff_serial(a, b) == 0.0);
    b.push_back(Point(9, 5.0));
    CHECK(semi_hausdorff_pruned(b, a) == semi_hausdorff_serial(b, a));
    CHECK(semi_hausdorff_pruned(b, a) > 4.0);
}

TEST_CASE("semi-distance on hand examples") {
    const std::vector<Point> a{{0.0, 0.0, 0.0}};
    const std::vector<Point> b{{3.0, 4.0, 0.0}, {0.0, 0.0, 12.0}};
    CHECK(semi_hausdorff_serial(a, b) == 5.0);
    CHECK(semi_hausdorff_pruned(b, a) == 12.0);
    CHECK(semi_hausdorff_parallel(b, a) == 12.0);
}

TEST_CASE("parallel evolution equals serial evolution") {
    std::mt19937_64 rng(3);
    auto a = random_cloud(rng, 50, 21, 1.0);
    auto b = a;
    const Advance step = [](std::span<double> u) {
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.9 * u[i] + 0.01 * std::sin(u[(i + 1) % u.size()]);
    };
    evolve_serial(a, step, 13);
    evolve_parallel(b, step, 13);
    CHECK(a == b);
}

TEST_CASE("parallel evolution rethrows the first failing point") {
    std::vector<Point> c{{1.0}, {2.0}, {-1.0}, {3.0}, {-2.0}};
    const Advance step = [](std::span<double> u) {
        if (u[0] < 0.0) throw std::runtime_error("negative " + std::to_string(static_cast<int>(u[0])));
        u[0] += 1.0;
    };
    try {
        evolve_parallel(c, step, 2);
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "negative -1");
    }
}

TEST_CASE("thread count can be set") {
    const int before = max_threads();
    set_threads(2);
    CHECK(max_threads() == 2);
    set_threads(before);
    CHECK(max_threads() == before);
}
