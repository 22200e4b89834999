#include "bhl/stochastic.hpp"

#include "bhl/dense_field.hpp"
#include "bhl/diagnostics.hpp"
#include "bhl/error.hpp"
#include "bhl/hash.hpp"
#include "bhl/implicit_euler.hpp"
#include "bhl/kernels.hpp"
#include "bhl/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include <json.hpp>

namespace bhl {

using nlohmann::json;

double OUPath::at(double t) const {
    const double slack = 1e-9 * h_path;
    if (z.empty() || t < t_min - slack || t > t_max + slack) {
        throw ConfigError("OU path queried at t = " + std::to_string(t) + " outside [" + std::to_string(t_min) +
                          ", " + std::to_string(t_max) + "]");
    }
    const double q = (t - t_min) / h_path;
    const std::size_t last = z.size() - 1;
    if (q <= 0.0) return z.front();
    const auto j = std::min(static_cast<std::size_t>(q), last);
    if (j == last) return z.back();
    const double w = q - static_cast<double>(j);
    return (1.0 - w) * z[j] + w * z[j + 1];
}

double ou_decay(double h) { return std::exp(-h); }

double ou_innovation_sd(double h) { return std::sqrt(-std::expm1(-2.0 * h) / 2.0); }

OUPath ou_path(std::uint64_t seed, double t_min, double t_max, double h) {
    if (!(h > 0.0)) throw ConfigError("ou_path: h must be positive");
    if (!(t_min < t_max)) throw ConfigError("ou_path: need t_min < t_max");
    const double steps = std::round((t_max - t_min) / h);
    const auto n = static_cast<std::size_t>(steps);

    OUPath p;
    p.seed = seed;
    p.h_path = h;
    p.t_max = t_max;
    p.t_min = t_max - steps * h;
    p.z.resize(n + 1);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double a = ou_decay(h);
    const double sd = ou_innovation_sd(h);
    // The stationary OU process is time reversible, so the backward recursion
    // has the same law as the forward one.
    p.z[n] = std::sqrt(ou_stationary_variance()) * normal(rng);
    for (std::size_t j = n; j > 0; --j) p.z[j - 1] = a * p.z[j] + sd * normal(rng);
    return p;
}

double ergodic_average(const OUPath& path) {
    const double horizon = path.t_max - path.t_min;
    if (horizon < 100.0 * (1.0 - 1e-12)) throw ConfigError("ergodic_average needs a horizon of at least 100");
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < path.z.size(); ++j) acc += 0.5 * (path.z[j] + path.z[j + 1]);
    return acc * path.h_path / horizon;
}

LatticeWindow random_field(const Params& p, double sigma, double z, const LatticeWindow& u) {
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
    const double e1 = std::exp(sigma * z);
    const double em = std::exp(-sigma * z);
    const double sz = sigma * z;
    const double s = p.laplacian_sign == LaplacianSign::positive ? 1.0 : -1.0;
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (Index i = lo; i <= hi; ++i) {
        const double um = u.at(i - 1);
        const double ui = u.at(i);
        const double up = u.at(i + 1);
        const double lap = s * (-um + 2.0 * ui - up);
        const double react = ui * (1.0 - e1 * ui) * (e1 * ui - p.gamma);
        out[static_cast<std::size_t>(i - lo)] = p.nu * lap - p.alpha * (e1 * (ui * (um - ui))) + p.beta * react -
                                                p.lambda * ui + em * p.f.at(i) + sz * ui;
    }
    return LatticeWindow(lo, std::move(out));
}

LatticeWindow random_field_jvp(const Params& p, double sigma, double z, const LatticeWindow& u,
                               const LatticeWindow& v) {
    const double e1 = std::exp(sigma * z);
    const double e2 = std::exp(2.0 * sigma * z);
    const LatticeWindow adv = hadamard(v, d_minus(u)) + hadamard(u, d_minus(v));
    const LatticeWindow uu = hadamard(u, u);
    const LatticeWindow react = (-3.0 * e2) * hadamard(uu, v) + (2.0 * (1.0 + p.gamma) * e1) * hadamard(u, v) -
                                p.gamma * v;
    return p.nu * laplacian(v, p.laplacian_sign) - (p.alpha * e1) * adv + p.beta * react +
           (sigma * z - p.lambda) * v;
}

void validate(const NoiseConfig& cfg) {
    if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) throw ConfigError("sigma must be >= 0");
    if (!(cfg.h_path > 0.0)) throw ConfigError("h_path must be positive");
    if (!(cfg.pullback_T > 0.0)) throw ConfigError("pullback_T must be positive");
    if (cfg.realizations < 1) throw ConfigError("realizations must be positive");
    if (cfg.dt < 0.0) throw ConfigError("dt must be >= 0 (0 selects the default)");
    if (!(cfg.quad_tol > 0.0 && cfg.quad_tol < 1.0)) throw ConfigError("quad_tol must lie in (0, 1)");
}

std::uint64_t realization_seed(const NoiseConfig& cfg, std::size_t i) { return derive_seed(cfg.master_seed, i); }

double pullback_dt(const Params& p, const NoiseConfig& cfg) {
    validate(cfg);
    if (cfg.dt > 0.0) return cfg.dt;
    const DerivedConstants dc = derived_constants(p);
    const double cap = std::min(dc.eps_star / 10.0, cfg.h_path);
    // Largest step below the cap that divides the horizon.
    return cfg.pullback_T / std::ceil(cfg.pullback_T / cap);
}

PointCloud pullback_sample(const Params& p, const NoiseConfig& cfg, std::size_t realization_index, double dt,
                           const PointCloud& initial) {
    validate(cfg);
    const OUPath path = ou_path(realization_seed(cfg, realization_index), -cfg.pullback_T, 0.0, cfg.h_path);
    return pullback_sample_on(p, cfg, path, dt, initial);
}

PointCloud pullback_sample_on(const Params& p, const NoiseConfig& cfg, const OUPath& path, double dt,
                              const PointCloud& initial) {
    validate(cfg);
    initial.check();
    const DerivedConstants dc = derived_constants(p);
    if (!(dt > 0.0)) throw ConfigError("pullback dt must be positive");
    if (dt > dc.eps_star) throw StepTooLarge(dt, dc.eps_star);
    if (path.t_min > -cfg.pullback_T + 1e-9 * cfg.h_path || path.t_max < 0.0) {
        throw HorizonTooShort(cfg.pullback_T, -path.t_min);
    }
    const std::size_t n = steps_in(cfg.pullback_T, dt);
    const double T = cfg.pullback_T;
    const double sigma = cfg.sigma;
    const Space space = initial.space;
    auto force = std::make_shared<const DenseForce>(DenseForce::make(p.f, space));

    kernels::Advance run;
    if (cfg.integrator == PathIntegrator::rk4) {
        run = [&, force](std::span<double> u) {
            Rk4Workspace ws(u.size());
            auto field = [&](double t, std::span<const double> x, std::span<double> out) {
                return eval_random_field(p, sigma, path.at(t), space, *force, x, out);
            };
            double clip = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double t = -T + static_cast<double>(k) * dt;
                clip = std::max(clip, rk4_step(field, t, dt, u, ws));
            }
            if (clip > kClipWarnThreshold) note_warning(Warning::tail_clipped);
        };
    } else {
        run = [&, force](std::span<double> u) {
            std::vector<double> prev(u.size());
            for (std::size_t k = 0; k < n; ++k) {
                const double z = path.at(-T + static_cast<double>(k + 1) * dt);
                auto field = [&](std::span<const double> x, std::span<double> out) {
                    return eval_random_field(p, sigma, z, space, *force, x, out);
                };
                std::copy(u.begin(), u.end(), prev.begin());
                const SolveStats st = picard_solve(field, dt, prev, u, 1e-12, 10000);
                if (st.clipped_mass > kClipWarnThreshold) note_warning(Warning::tail_clipped);
            }
        };
    }

    PointCloud out = initial;
    kernels::evolve_parallel(out.points, run, 1);
    out.meta.eps = dt;
    out.meta.sigma = sigma;
    out.meta.seed = path.seed;
    out.meta.pullback_T = T;
    out.meta.steps_evolved = n;
    if (space.kind == SpaceKind::truncated) out.meta.m = space.half_width;
    return out;
}

double absorbing_horizon(const Params& p, double quad_tol) {
    if (!(quad_tol > 0.0 && quad_tol < 1.0)) throw ConfigError("quad_tol must lie in (0, 1)");
    const DerivedConstants dc = derived_constants(p);
    return std::log(1.0 / quad_tol) / dc.gap();
}

AbsorbingRadius absorbing_radius(const Params& p, double sigma, const OUPath& path, double quad_tol) {
    const DerivedConstants dc = derived_constants(p);
    const double g = dc.gap();
    const double S = absorbing_horizon(p, quad_tol);
    if (path.t_max < 0.0 || -path.t_min < S * (1.0 - 1e-12)) throw HorizonTooShort(S, -path.t_min);

    AbsorbingRadius res;
    res.horizon = -path.t_min;
    const double pref = dc.force_norm * dc.force_norm / g;
    if (pref == 0.0) return res;

    const std::size_t j0 = steps_in(-path.t_min, path.h_path);
    const double h = path.h_path;
    // Walk back from s = 0; inner = -int_0^s 2 sigma z dr = int_s^0 2 sigma z dr.
    double inner = 0.0;
    double phi_prev = std::exp(-2.0 * sigma * path.z[j0]);
    double integral = 0.0;
    for (std::size_t j = j0; j > 0; --j) {
        inner += sigma * h * (path.z[j] + path.z[j - 1]);
        const double s = -static_cast<double>(j0 - j + 1) * h;
        const double phi = std::exp(-2.0 * sigma * path.z[j - 1] + inner + g * s);
        integral += 0.5 * h * (phi_prev + phi);
        phi_prev = phi;
    }
    res.value = 1.0 + pref * integral;
    res.tail_estimate = pref * phi_prev / g;
    return res;
}

std::string ou_path_to_json(const OUPath& path) {
    const json doc = {{"format", "bhl.oupath"}, {"version", 1},          {"t_min", path.t_min},
                      {"t_max", path.t_max},    {"h_path", path.h_path}, {"seed", path.seed},
                      {"z", path.z}};
    return doc.dump();
}

OUPath ou_path_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        if (doc.at("format") != "bhl.oupath") throw ConfigError("not an OU path document");
        if (doc.at("version").get<int>() != 1) throw ConfigError("unsupported OU path version");
        OUPath p;
        p.t_min = doc.at("t_min").get<double>();
        p.t_max = doc.at("t_max").get<double>();
        p.h_path = doc.at("h_path").get<double>();
        p.seed = doc.at("seed").get<std::uint64_t>();
        p.z = doc.at("z").get<std::vector<double>>();
        const auto expect = static_cast<std::size_t>(std::round((p.t_max - p.t_min) / p.h_path)) + 1;
        if (p.z.size() != expect) throw ConfigError("OU path length does not match its grid");
        return p;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed OU path document: ") + e.what());
    }
}

void save_ou_path(const OUPath& path, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    out << ou_path_to_json(path) << '\n';
}

OUPath load_ou_path(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ou_path_from_json(ss.str());
}

} // namespace bhl
