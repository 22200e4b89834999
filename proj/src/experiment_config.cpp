#include "bhl/experiment_config.hpp"

#include "bhl/error.hpp"
#include "bhl/hash.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bhl {

using nlohmann::json;

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.params.f = LatticeWindow::unit(0, 0.08984375);
    return cfg;
}

void validate_structure(const ExperimentConfig& cfg) {
    validate(cfg.params);
    if (cfg.window_half_width < 1) throw ConfigError("window_half_width must be positive");
    const Grids& g = cfg.grids;
    if (g.eps_list.empty()) throw ConfigError("grids.eps_list is empty");
    for (double e : g.eps_list) {
        if (!(e > 0.0)) throw ConfigError("grids.eps_list entries must be positive");
    }
    if (!std::is_sorted(g.m_list.begin(), g.m_list.end()) ||
        std::adjacent_find(g.m_list.begin(), g.m_list.end()) != g.m_list.end()) {
        throw ConfigError("grids.m_list must be strictly ascending");
    }
    for (Index m : g.m_list) {
        if (m < 2) throw ConfigError("grids.m_list entries must be at least 2");
        if (m >= cfg.window_half_width) throw ConfigError("grids.m_list entries must be below window_half_width");
    }
    if (!std::is_sorted(g.sigma_list.rbegin(), g.sigma_list.rend())) {
        throw ConfigError("grids.sigma_list must be descending");
    }
    for (double s : g.sigma_list) {
        if (!(s >= 0.0)) throw ConfigError("grids.sigma_list entries must be >= 0");
    }
    validate(cfg.attractor);
    validate(cfg.noise);
    if (!(cfg.reference.eps_ref > 0.0) || !(cfg.reference.dt_ref > 0.0)) {
        throw ConfigError("reference.eps_ref and reference.dt_ref must be positive");
    }
    const double min_eps = *std::min_element(g.eps_list.begin(), g.eps_list.end());
    if (!(cfg.reference.eps_ref < min_eps / 4.0)) throw ConfigError("reference.eps_ref must be below min(eps_list)/4");
    (void)steps_in(cfg.reference.eps_ref, cfg.reference.dt_ref);
    if (!(cfg.solver.fp_tol > 0.0) || cfg.solver.max_iter < 1) throw ConfigError("solver settings out of range");
    const ErrorOrderConfig& eo = cfg.error_order;
    if (!(eo.horizon > 0.0) || eo.samples < 1 || eo.support < 0 || !(eo.dt_ref_ratio > 0.0 && eo.dt_ref_ratio <= 1.0)) {
        throw ConfigError("error_order settings out of range");
    }
    if (eo.support >= cfg.window_half_width) throw ConfigError("error_order.support must be below window_half_width");
    if (!(cfg.bounds.eps > 0.0) || cfg.bounds.lambda_list.empty() || cfg.bounds.force_scales.empty()) {
        throw ConfigError("bounds settings out of range");
    }
    if (!std::is_sorted(cfg.bounds.lambda_list.begin(), cfg.bounds.lambda_list.end())) {
        throw ConfigError("bounds.lambda_list must be ascending");
    }
    if (cfg.bounds.m < 1 || cfg.bounds.m >= cfg.window_half_width) throw ConfigError("bounds.m out of range");
    if (!(cfg.trend.rel_slack >= 0.0) || !(cfg.trend.abs_floor >= 0.0)) throw ConfigError("trend slacks must be >= 0");
    if (cfg.noise_experiment.m < 1 || cfg.noise_experiment.cloud_size < 1) {
        throw ConfigError("noise_experiment settings out of range");
    }
    if (!(cfg.dim_eps > 0.0) || !(cfg.tail_delta > 0.0)) throw ConfigError("dim_eps and tail_delta must be positive");
}

void validate(const ExperimentConfig& cfg) {
    validate_structure(cfg);
    const DerivedConstants dc = derived_constants(cfg.params);
    for (double e : cfg.grids.eps_list) {
        if (e > dc.eps_star) throw StepTooLarge(e, dc.eps_star);
    }
    if (cfg.dim_eps > dc.eps_star) throw StepTooLarge(cfg.dim_eps, dc.eps_star);
    for (double lam : cfg.bounds.lambda_list) {
        Params p = cfg.params;
        p.lambda = lam;
        const DerivedConstants d = derived_constants(p);
        if (cfg.bounds.eps > d.eps_star) throw StepTooLarge(cfg.bounds.eps, d.eps_star);
    }
}

StepConfig step_config(const ExperimentConfig& cfg, double eps) {
    StepConfig s;
    s.eps = eps;
    s.fp_tol = cfg.solver.fp_tol;
    s.max_iter = cfg.solver.max_iter;
    s.solver = cfg.solver.solver;
    s.max_half_width = cfg.window_half_width;
    return s;
}

json params_to_json(const Params& p) {
    const LatticeWindow f = p.f.normalized();
    return {{"nu", p.nu},
            {"alpha", p.alpha},
            {"beta", p.beta},
            {"gamma", p.gamma},
            {"lambda", p.lambda},
            {"f", {{"offset", f.offset()}, {"values", std::vector<double>(f.values().begin(), f.values().end())}}},
            {"laplacian_sign", p.laplacian_sign == LaplacianSign::positive ? "positive" : "continuum"}};
}

Params params_from_json(const json& j) {
    Params p;
    p.nu = j.at("nu").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.f = LatticeWindow(j.at("f").at("offset").get<Index>(), j.at("f").at("values").get<std::vector<double>>());
    const std::string sign = j.at("laplacian_sign").get<std::string>();
    if (sign == "positive") {
        p.laplacian_sign = LaplacianSign::positive;
    } else if (sign == "continuum") {
        p.laplacian_sign = LaplacianSign::continuum;
    } else {
        throw ConfigError("laplacian_sign must be 'positive' or 'continuum'");
    }
    return p;
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["params"] = params_to_json(c.params);
    j["window_half_width"] = c.window_half_width;
    j["grids"] = {{"eps_list", c.grids.eps_list}, {"m_list", c.grids.m_list}, {"sigma_list", c.grids.sigma_list}};
    j["attractor"] = {{"sample_count", c.attractor.sample_count},
                      {"burn_in", c.attractor.burn_in},
                      {"stabilization_gap", c.attractor.stabilization_gap},
                      {"stabilization_tol", c.attractor.stabilization_tol},
                      {"max_rounds", c.attractor.max_rounds}};
    j["noise"] = {{"h_path", c.noise.h_path},
                  {"pullback_T", c.noise.pullback_T},
                  {"realizations", c.noise.realizations},
                  {"integrator", c.noise.integrator == PathIntegrator::rk4 ? "rk4" : "implicit_euler"},
                  {"dt", c.noise.dt},
                  {"quad_tol", c.noise.quad_tol},
                  {"m", c.noise_experiment.m},
                  {"cloud_size", c.noise_experiment.cloud_size}};
    j["reference"] = {{"eps_ref", c.reference.eps_ref}, {"dt_ref", c.reference.dt_ref}};
    j["solver"] = {{"fp_tol", c.solver.fp_tol},
                   {"max_iter", c.solver.max_iter},
                   {"inner", c.solver.solver == InnerSolver::picard ? "picard" : "newton"}};
    j["error_order"] = {{"horizon", c.error_order.horizon},
                        {"samples", c.error_order.samples},
                        {"support", c.error_order.support},
                        {"dt_ref_ratio", c.error_order.dt_ref_ratio}};
    j["bounds"] = {{"eps", c.bounds.eps},
                   {"lambda_list", c.bounds.lambda_list},
                   {"force_scales", c.bounds.force_scales},
                   {"m", c.bounds.m}};
    j["trend"] = {{"rel_slack", c.trend.rel_slack}, {"abs_floor", c.trend.abs_floor}};
    j["dim_eps"] = c.dim_eps;
    j["tail_delta"] = c.tail_delta;
    j["output_dir"] = c.output_dir;
    j["master_seed"] = c.master_seed;
    return j;
}

namespace {

void merge_strict(json& base, const json& user, const std::string& where) {
    if (!user.is_object()) throw ConfigError(where.empty() ? "config must be a JSON object" : where + " must be an object");
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = where.empty() ? it.key() : where + "." + it.key();
        if (!base.contains(it.key())) throw ConfigError("unknown config key '" + key + "'");
        json& slot = base[it.key()];
        // Params.f is replaced as a whole; everything else merges key by key.
        if (slot.is_object() && key != "params.f") {
            merge_strict(slot, it.value(), key);
        } else {
            slot = it.value();
        }
    }
}

} // namespace

ExperimentConfig config_from_json(const json& user) {
    json j = to_json(default_config());
    merge_strict(j, user, "");
    try {
        ExperimentConfig c;
        c.params = params_from_json(j.at("params"));
        c.window_half_width = j.at("window_half_width").get<Index>();
        const json& g = j.at("grids");
        c.grids.eps_list = g.at("eps_list").get<std::vector<double>>();
        c.grids.m_list = g.at("m_list").get<std::vector<Index>>();
        c.grids.sigma_list = g.at("sigma_list").get<std::vector<double>>();
        const json& a = j.at("attractor");
        c.attractor.sample_count = a.at("sample_count").get<std::size_t>();
        c.attractor.burn_in = a.at("burn_in").get<std::size_t>();
        c.attractor.stabilization_gap = a.at("stabilization_gap").get<std::size_t>();
        c.attractor.stabilization_tol = a.at("stabilization_tol").get<double>();
        c.attractor.max_rounds = a.at("max_rounds").get<std::size_t>();
        const json& n = j.at("noise");
        c.noise.h_path = n.at("h_path").get<double>();
        c.noise.pullback_T = n.at("pullback_T").get<double>();
        c.noise.realizations = n.at("realizations").get<std::size_t>();
        const std::string integ = n.at("integrator").get<std::string>();
        if (integ != "rk4" && integ != "implicit_euler") throw ConfigError("noise.integrator must be rk4 or implicit_euler");
        c.noise.integrator = integ == "rk4" ? PathIntegrator::rk4 : PathIntegrator::implicit_euler;
        c.noise.dt = n.at("dt").get<double>();
        c.noise.quad_tol = n.at("quad_tol").get<double>();
        c.noise_experiment.m = n.at("m").get<Index>();
        c.noise_experiment.cloud_size = n.at("cloud_size").get<std::size_t>();
        c.reference.eps_ref = j.at("reference").at("eps_ref").get<double>();
        c.reference.dt_ref = j.at("reference").at("dt_ref").get<double>();
        const json& s = j.at("solver");
        c.solver.fp_tol = s.at("fp_tol").get<double>();
        c.solver.max_iter = s.at("max_iter").get<int>();
        const std::string inner = s.at("inner").get<std::string>();
        if (inner != "picard" && inner != "newton") throw ConfigError("solver.inner must be picard or newton");
        c.solver.solver = inner == "picard" ? InnerSolver::picard : InnerSolver::newton;
        const json& e = j.at("error_order");
        c.error_order.horizon = e.at("horizon").get<double>();
        c.error_order.samples = e.at("samples").get<std::size_t>();
        c.error_order.support = e.at("support").get<Index>();
        c.error_order.dt_ref_ratio = e.at("dt_ref_ratio").get<double>();
        const json& b = j.at("bounds");
        c.bounds.eps = b.at("eps").get<double>();
        c.bounds.lambda_list = b.at("lambda_list").get<std::vector<double>>();
        c.bounds.force_scales = b.at("force_scales").get<std::vector<double>>();
        c.bounds.m = b.at("m").get<Index>();
        c.trend.rel_slack = j.at("trend").at("rel_slack").get<double>();
        c.trend.abs_floor = j.at("trend").at("abs_floor").get<double>();
        c.dim_eps = j.at("dim_eps").get<double>();
        c.tail_delta = j.at("tail_delta").get<double>();
        c.output_dir = j.at("output_dir").get<std::string>();
        c.master_seed = j.at("master_seed").get<std::uint64_t>();
        validate_structure(c);
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return config_from_json(json::parse(ss.str()));
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

std::string config_hash(const ExperimentConfig& cfg) {
    json j = to_json(cfg);
    j.erase("output_dir");
    return hex64(fnv1a64(j.dump()));
}

} // namespace bhl
