#include "bhl/cloud.hpp"

#include "bhl/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bhl {

using nlohmann::json;

namespace {

constexpr int kCloudVersion = 1;

} // namespace

void PointCloud::check() const {
    if (points.empty()) throw ConfigError("point cloud is empty");
    const std::size_t d = space.dim();
    for (const auto& p : points) {
        if (p.size() != d) throw ConfigError("point cloud: point of length " + std::to_string(p.size()) +
                                             " in space of dimension " + std::to_string(d));
        for (double v : p) {
            if (!std::isfinite(v)) throw NonFinite("point cloud: non-finite component");
        }
    }
}

LatticeWindow PointCloud::point_window(std::size_t j) const {
    return LatticeWindow(space.first_index(), points.at(j));
}

std::string cloud_to_json(const PointCloud& c) {
    json meta = {{"eps", c.meta.eps}, {"seed", c.meta.seed}, {"steps_evolved", c.meta.steps_evolved}};
    meta["m"] = c.meta.m ? json(*c.meta.m) : json(nullptr);
    meta["sigma"] = c.meta.sigma ? json(*c.meta.sigma) : json(nullptr);
    meta["pullback_T"] = c.meta.pullback_T ? json(*c.meta.pullback_T) : json(nullptr);

    json doc = {{"format", "bhl.cloud"},
                {"version", kCloudVersion},
                {"space", c.space.kind == SpaceKind::window ? "window" : "truncated"},
                {"half_width", c.space.half_width},
                {"offset", c.space.first_index()},
                {"points", c.points},
                {"meta", meta}};
    return doc.dump();
}

PointCloud cloud_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format") != "bhl.cloud") throw ConfigError("not a cloud document");
        if (doc.at("version").get<int>() != kCloudVersion) {
            throw ConfigError("unsupported cloud version " + doc.at("version").dump());
        }
        PointCloud c;
        const std::string kind = doc.at("space").get<std::string>();
        if (kind != "window" && kind != "truncated") throw ConfigError("unknown space kind '" + kind + "'");
        const Index hw = doc.at("half_width").get<Index>();
        c.space = kind == "window" ? Space::window(hw) : Space::truncated(hw);
        c.points = doc.at("points").get<std::vector<std::vector<double>>>();

        const json& meta = doc.at("meta");
        c.meta.eps = meta.at("eps").get<double>();
        c.meta.seed = meta.at("seed").get<std::uint64_t>();
        c.meta.steps_evolved = meta.at("steps_evolved").get<std::size_t>();
        if (!meta.at("m").is_null()) c.meta.m = meta.at("m").get<Index>();
        if (!meta.at("sigma").is_null()) c.meta.sigma = meta.at("sigma").get<double>();
        if (!meta.at("pullback_T").is_null()) c.meta.pullback_T = meta.at("pullback_T").get<double>();
        c.check();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed cloud document: ") + e.what());
    }
}

void save_cloud(const PointCloud& c, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << cloud_to_json(c) << '\n';
}

PointCloud load_cloud(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return cloud_from_json(ss.str());
}

} // namespace bhl
