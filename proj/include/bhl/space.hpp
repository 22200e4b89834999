#pragma once

#include "bhl/lattice.hpp"

#include <cstddef>
#include <string>

namespace bhl {

enum class SpaceKind { window, truncated };

/// Finite-dimensional state space used for dense computation.
///
/// `window`: components -K..K of the bi-infinite lattice; anything pushed
/// beyond |i| = K is clipped (and its mass reported).
/// `truncated`: the Dirichlet-truncated system on -m..m with the boundary
/// closure of the truncated Laplacian.
struct Space {
    SpaceKind kind = SpaceKind::window;
    Index half_width = 128;

    static constexpr Space window(Index k) noexcept { return {SpaceKind::window, k}; }
    static constexpr Space truncated(Index m) noexcept { return {SpaceKind::truncated, m}; }

    constexpr std::size_t dim() const noexcept { return static_cast<std::size_t>(2 * half_width + 1); }
    constexpr Index first_index() const noexcept { return -half_width; }

    friend constexpr bool operator==(const Space&, const Space&) = default;
};

std::string to_string(const Space& s);

} // namespace bhl
