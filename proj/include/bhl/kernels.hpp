#pragma once

// Data-parallel kernels over point clouds.
//
// Each kernel has a serial reference version and an OpenMP version; the two
// must agree bitwise. Points are independent, so cloud evolution parallelizes
// over points, and the semi-distance over the outer cloud. Reductions are
// max/min only, which are exact and order independent.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bhl::kernels {

using Point = std::vector<double>;

/// Advances one state by one step, in place. Must be safe to call
/// concurrently on distinct states.
using Advance = std::function<void(std::span<double>)>;

void evolve_serial(std::span<Point> points, const Advance& advance, std::size_t steps);
void evolve_parallel(std::span<Point> points, const Advance& advance, std::size_t steps);

/// max_a min_b ||a - b||, exact double loop.
double semi_hausdorff_serial(std::span<const Point> a, std::span<const Point> b);
double semi_hausdorff_parallel(std::span<const Point> a, std::span<const Point> b);

/// Same value as the double loop, with early exit once a point cannot raise
/// the running maximum and early abandon of partial distance sums.
double semi_hausdorff_pruned(std::span<const Point> a, std::span<const Point> b);

/// Number of worker threads the parallel kernels will use.
int max_threads();
void set_threads(int n);

} // namespace bhl::kernels
