#include "bhl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bhl::kernels {

namespace {

double min_sq_distance(const Point& a, std::span<const Point> b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : b) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double d = a[j] - q[j];
            acc += d * d;
        }
        best = std::min(best, acc);
    }
    return best;
}

} // namespace

void evolve_serial(std::span<Point> points, const Advance& advance, std::size_t steps) {
    for (Point& p : points) {
        for (std::size_t k = 0; k < steps; ++k) advance(p);
    }
}

void evolve_parallel(std::span<Point> points, const Advance& advance, std::size_t steps) {
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            for (std::size_t k = 0; k < steps; ++k) advance(points[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    // Lowest failing index wins, so the reported error is thread-count independent.
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double semi_hausdorff_serial(std::span<const Point> a, std::span<const Point> b) {
    double worst = 0.0;
    for (const Point& p : a) worst = std::max(worst, min_sq_distance(p, b));
    return std::sqrt(worst);
}

double semi_hausdorff_parallel(std::span<const Point> a, std::span<const Point> b) {
    const auto n = static_cast<std::ptrdiff_t>(a.size());
    std::vector<double> mins(a.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        mins[static_cast<std::size_t>(i)] = min_sq_distance(a[static_cast<std::size_t>(i)], b);
    }
    double worst = 0.0;
    for (double m : mins) worst = std::max(worst, m);
    return std::sqrt(worst);
}

double semi_hausdorff_pruned(std::span<const Point> a, std::span<const Point> b) {
    double worst = 0.0;
    for (const Point& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : b) {
            double acc = 0.0;
            std::size_t j = 0;
            for (; j < p.size(); ++j) {
                const double d = p[j] - q[j];
                acc += d * d;
                if (acc >= best) break;
            }
            if (j == p.size()) best = std::min(best, acc);
            if (best <= worst) break;
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

} // namespace bhl::kernels
