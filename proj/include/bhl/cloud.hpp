#pragma once

#include "bhl/lattice.hpp"
#include "bhl/space.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bhl {

struct CloudMeta {
    double eps = 0.0;
    std::optional<Index> m;
    std::optional<double> sigma;
    std::uint64_t seed = 0;
    std::size_t steps_evolved = 0;
    std::optional<double> pullback_T;

    friend bool operator==(const CloudMeta&, const CloudMeta&) = default;
};

/// A finite set of states in one dense space. Each point holds components
/// -hw..hw of the space.
struct PointCloud {
    Space space;
    std::vector<std::vector<double>> points;
    CloudMeta meta;

    std::size_t size() const noexcept { return points.size(); }

    /// Throws ConfigError if empty or a point has the wrong length, NonFinite
    /// on a non-finite component.
    void check() const;

    LatticeWindow point_window(std::size_t j) const;

    friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

/// Versioned JSON document; doubles are written so that reading back is exact.
std::string cloud_to_json(const PointCloud& c);
PointCloud cloud_from_json(const std::string& text);

void save_cloud(const PointCloud& c, const std::filesystem::path& path);
PointCloud load_cloud(const std::filesystem::path& path);

} // namespace bhl
