#include "bhl/experiments.hpp"

#include "bhl/error.hpp"
#include "bhl/hash.hpp"
#include "bhl/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

namespace bhl {

namespace {

Provenance start_provenance(const ExperimentConfig& cfg) {
    Provenance p;
    p.config_hash = config_hash(cfg);
    p.code_version = code_version();
    p.started_utc = utc_now();
    return p;
}

std::string eps_tag(const char* prefix, double v) {
    std::string s = format_g17(v);
    std::replace(s.begin(), s.end(), '.', 'p');
    return std::string(prefix) + s;
}

AttractorResult implicit_attractor(const Params& p, const ExperimentConfig& cfg, double eps, const Space& space,
                                   std::uint64_t seed) {
    const DerivedConstants dc = derived_constants(p);
    AttractorConfig ac = cfg.attractor;
    ac.seed = seed;
    StepConfig sc = step_config(cfg, eps);
    if (space.kind == SpaceKind::window) sc.max_half_width = space.half_width;
    return attractor_approx(implicit_euler_stepper(p, sc, space), ac, dc.r_star);
}

double mean(std::span<const double> v) {
    return v.empty() ? std::nan("") : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double standard_error(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

} // namespace

std::uint64_t stream_seed(const ExperimentConfig& cfg, const char* stream) {
    return derive_seed(cfg.master_seed, fnv1a64(stream));
}

std::optional<TrendViolation> first_increase(std::span<const double> v, double rel_slack, double abs_floor) {
    for (std::size_t j = 1; j < v.size(); ++j) {
        const double allowed = (1.0 + rel_slack) * v[j - 1] + abs_floor;
        if (!(v[j] <= allowed)) return TrendViolation{j, v[j - 1], v[j], allowed};
    }
    return std::nullopt;
}

std::optional<TrendViolation> first_increase_se(std::span<const double> v, std::span<const double> se) {
    for (std::size_t j = 1; j < v.size(); ++j) {
        const double allowed = v[j - 1] + std::max(se[j - 1], se[j]);
        if (!(v[j] <= allowed)) return TrendViolation{j, v[j - 1], v[j], allowed};
    }
    return std::nullopt;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("loglog_slope needs two or more points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double lx = std::log(x[j]);
        const double ly = std::log(y[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ExperimentOutput run_eps_convergence(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    Provenance prov = start_provenance(cfg);
    const Params& p = cfg.params;
    const DerivedConstants dc = derived_constants(p);
    const Space w = Space::window(cfg.window_half_width);
    const std::uint64_t seed = stream_seed(cfg, "eps-convergence");

    AttractorConfig ac = cfg.attractor;
    ac.seed = seed;
    const AttractorResult ref =
        attractor_approx(reference_flow_stepper(p, w, cfg.reference.eps_ref, cfg.reference.dt_ref), ac, dc.r_star);
    out.clouds.emplace_back("eps_reference", ref.cloud);

    std::vector<double> eps, d_semi, d_sym, nrm, rounds, steps;
    for (double e : cfg.grids.eps_list) {
        const AttractorResult r = implicit_attractor(p, cfg, e, w, seed);
        eps.push_back(e);
        d_semi.push_back(hausdorff_semi(r.cloud, ref.cloud));
        d_sym.push_back(hausdorff_sym(r.cloud, ref.cloud));
        nrm.push_back(cloud_norm(r.cloud));
        rounds.push_back(static_cast<double>(r.rounds));
        steps.push_back(static_cast<double>(r.cloud.meta.steps_evolved));
        out.clouds.emplace_back(eps_tag("eps_", e), r.cloud);
    }
    const std::size_t n = eps.size();
    ResultTable& t = out.table = ResultTable("converge_eps");
    t.add_column("eps", eps);
    t.add_column("d_semi", d_semi);
    t.add_column("d_sym", d_sym);
    t.add_column("norm", nrm);
    t.add_column("rounds", rounds);
    t.add_column("steps", steps);
    t.add_column("rel_slack", std::vector<double>(n, cfg.trend.rel_slack));
    t.add_column("abs_floor", std::vector<double>(n, cfg.trend.abs_floor));
    t.summary["eps_ref"] = cfg.reference.eps_ref;
    t.summary["dt_ref"] = cfg.reference.dt_ref;
    t.summary["reference_norm"] = cloud_norm(ref.cloud);
    t.summary["reference_rounds"] = static_cast<double>(ref.rounds);
    t.summary["trend_ok"] = first_increase(d_semi, cfg.trend.rel_slack, cfg.trend.abs_floor) ? 0.0 : 1.0;
    prov.finished_utc = utc_now();
    t.provenance = prov;
    return out;
}

ExperimentOutput run_dim_convergence(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    Provenance prov = start_provenance(cfg);
    const Params& p = cfg.params;
    const Space w = Space::window(cfg.window_half_width);
    const std::uint64_t seed = stream_seed(cfg, "dim-convergence");

    const AttractorResult full = implicit_attractor(p, cfg, cfg.dim_eps, w, seed);
    out.clouds.emplace_back("dim_window", full.cloud);

    std::vector<double> ms, d_semi, tails, nrm, rounds;
    for (Index m : cfg.grids.m_list) {
        const AttractorResult r = implicit_attractor(p, cfg, cfg.dim_eps, Space::truncated(m), seed);
        ms.push_back(static_cast<double>(m));
        d_semi.push_back(hausdorff_semi(embed(r.cloud, w), full.cloud));
        tails.push_back(tail_profile(r.cloud, m / 2));
        nrm.push_back(cloud_norm(r.cloud));
        rounds.push_back(static_cast<double>(r.rounds));
        out.clouds.emplace_back("dim_m" + std::to_string(m), r.cloud);
    }
    const std::size_t n = ms.size();
    ResultTable& t = out.table = ResultTable("converge_dim");
    t.add_column("m", ms);
    t.add_column("d_semi", d_semi);
    t.add_column("tail_profile", tails);
    t.add_column("norm", nrm);
    t.add_column("rounds", rounds);
    t.add_column("rel_slack", std::vector<double>(n, cfg.trend.rel_slack));
    t.add_column("abs_floor", std::vector<double>(n, cfg.trend.abs_floor));
    t.add_column("tail_delta", std::vector<double>(n, cfg.tail_delta));
    t.summary["eps"] = cfg.dim_eps;
    t.summary["window_norm"] = cloud_norm(full.cloud);
    t.summary["trend_ok"] = first_increase(d_semi, cfg.trend.rel_slack, cfg.trend.abs_floor) ? 0.0 : 1.0;
    prov.finished_utc = utc_now();
    t.provenance = prov;
    return out;
}

ExperimentOutput run_noise_convergence(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    Provenance prov = start_provenance(cfg);
    const Params& p = cfg.params;
    const DerivedConstants dc = derived_constants(p);
    const Space s = Space::truncated(cfg.noise_experiment.m);

    AttractorConfig ac = cfg.attractor;
    ac.seed = stream_seed(cfg, "noise-deterministic");
    const AttractorResult det =
        attractor_approx(reference_flow_stepper(p, s, cfg.reference.eps_ref, cfg.reference.dt_ref), ac, dc.r_star);
    out.clouds.emplace_back("noise_deterministic", det.cloud);

    NoiseConfig nc = cfg.noise;
    nc.master_seed = stream_seed(cfg, "noise-paths");
    const double dt = pullback_dt(p, nc);
    const PointCloud initial =
        sample_ball(dc.r_star, s, cfg.noise_experiment.cloud_size, stream_seed(cfg, "noise-initial"));
    const double S = absorbing_horizon(p, nc.quad_tol);
    const double h = nc.h_path;
    const double t_min = -h * std::ceil(std::max(nc.pullback_T, S) / h - 1e-9);

    std::vector<double> sig, mean_d, max_d, se_d, mean_R, se_R, max_tail, n_ok, n_failed;
    const std::size_t nr = nc.realizations;
    for (double sigma : cfg.grids.sigma_list) {
        nc.sigma = sigma;
        std::vector<double> dist(nr, std::nan("")), radius(nr, std::nan("")), tail(nr, 0.0);
        std::vector<std::exception_ptr> errs(nr);
        std::vector<char> failed(nr, 0);
        const auto nri = static_cast<std::ptrdiff_t>(nr);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < nri; ++i) {
            const auto k = static_cast<std::size_t>(i);
            try {
                const OUPath path = ou_path(realization_seed(nc, k), t_min, 0.0, h);
                const AbsorbingRadius R = absorbing_radius(p, sigma, path, nc.quad_tol);
                radius[k] = R.value;
                tail[k] = R.tail_estimate;
                try {
                    const PointCloud sample = pullback_sample_on(p, nc, path, dt, initial);
                    dist[k] = hausdorff_semi(sample, det.cloud);
                } catch (const NumericalFailure&) {
                    failed[k] = 1;
                }
            } catch (...) {
                errs[k] = std::current_exception();
            }
        }
        for (auto& e : errs) {
            if (e) std::rethrow_exception(e);
        }
        std::vector<double> ok;
        for (std::size_t k = 0; k < nr; ++k) {
            if (!failed[k]) ok.push_back(dist[k]);
        }
        sig.push_back(sigma);
        mean_d.push_back(mean(ok));
        max_d.push_back(ok.empty() ? std::nan("") : *std::max_element(ok.begin(), ok.end()));
        se_d.push_back(standard_error(ok));
        mean_R.push_back(mean(radius));
        se_R.push_back(standard_error(radius));
        max_tail.push_back(*std::max_element(tail.begin(), tail.end()));
        n_ok.push_back(static_cast<double>(ok.size()));
        n_failed.push_back(static_cast<double>(nr - ok.size()));
    }
    ResultTable& t = out.table = ResultTable("converge_noise");
    t.add_column("sigma", sig);
    t.add_column("mean_d", mean_d);
    t.add_column("max_d", max_d);
    t.add_column("se_d", se_d);
    t.add_column("mean_R", mean_R);
    t.add_column("se_R", se_R);
    t.add_column("max_R_tail", max_tail);
    t.add_column("n_ok", n_ok);
    t.add_column("n_failed", n_failed);
    const double g = dc.gap();
    t.summary["R_limit"] = 1.0 + dc.force_norm * dc.force_norm / (g * g);
    t.summary["quad_tol"] = nc.quad_tol;
    t.summary["pullback_T"] = nc.pullback_T;
    t.summary["dt"] = dt;
    t.summary["m"] = static_cast<double>(cfg.noise_experiment.m);
    t.summary["deterministic_norm"] = cloud_norm(det.cloud);
    prov.finished_utc = utc_now();
    t.provenance = prov;
    return out;
}

ExperimentOutput run_error_order(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    Provenance prov = start_provenance(cfg);
    const Params& p = cfg.params;
    const DerivedConstants dc = derived_constants(p);
    const ErrorOrderConfig& eo = cfg.error_order;
    const PointCloud ys =
        sample_ball(dc.r_star, Space::window(eo.support), eo.samples, stream_seed(cfg, "error-order"));

    const double l0 = dc.l_of_r(dc.r_star);
    const double m0 = dc.m_of_r(dc.r_star);
    const double l1 = dc.l_of_r(dc.r_star + 1.0);

    std::vector<double> eps, dts, lmean, lmax, gmean, gmax, lbound, gbound;
    bool bounds_ok = true;
    for (double e : cfg.grids.eps_list) {
        const double dt_ref = eo.dt_ref_ratio * e;
        const StepConfig base = step_config(cfg, e);
        std::vector<double> loc(ys.size()), glob(ys.size());
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const LatticeWindow y = ys.point_window(j);
            loc[j] = local_error(p, e, y, dt_ref, base);
            glob[j] = global_error(p, e, y, eo.horizon, dt_ref, base);
        }
        eps.push_back(e);
        dts.push_back(dt_ref);
        lmean.push_back(mean(loc));
        lmax.push_back(*std::max_element(loc.begin(), loc.end()));
        gmean.push_back(mean(glob));
        gmax.push_back(*std::max_element(glob.begin(), glob.end()));
        lbound.push_back(l0 * m0 * l1 * e * e);
        gbound.push_back(0.5 * m0 * std::exp(l0 * eo.horizon) * e);
        bounds_ok = bounds_ok && lmax.back() <= lbound.back() && gmax.back() <= gbound.back();
    }
    ResultTable& t = out.table = ResultTable("error_order");
    t.add_column("eps", eps);
    t.add_column("dt_ref", dts);
    t.add_column("local_mean", lmean);
    t.add_column("local_max", lmax);
    t.add_column("global_mean", gmean);
    t.add_column("global_max", gmax);
    t.add_column("local_bound", lbound);
    t.add_column("global_bound", gbound);
    t.summary["local_slope"] = loglog_slope(eps, lmean);
    t.summary["global_slope"] = loglog_slope(eps, gmean);
    t.summary["horizon"] = eo.horizon;
    t.summary["bounds_ok"] = bounds_ok ? 1.0 : 0.0;
    prov.finished_utc = utc_now();
    t.provenance = prov;
    return out;
}

ExperimentOutput run_bounds(const ExperimentConfig& cfg) {
    validate(cfg);
    ExperimentOutput out;
    Provenance prov = start_provenance(cfg);
    const Space w = Space::window(cfg.window_half_width);
    const Space tr = Space::truncated(cfg.bounds.m);
    const std::uint64_t seed = stream_seed(cfg, "bounds");

    std::vector<double> lam, scale, fnorm, lstar, bound, nw, nt;
    for (double l : cfg.bounds.lambda_list) {
        for (double c : cfg.bounds.force_scales) {
            Params p = cfg.params;
            p.lambda = l;
            p.f = c * cfg.params.f;
            const DerivedConstants dc = derived_constants(p);
            const AttractorResult a = implicit_attractor(p, cfg, cfg.bounds.eps, w, seed);
            const AttractorResult am = implicit_attractor(p, cfg, cfg.bounds.eps, tr, seed);
            lam.push_back(l);
            scale.push_back(c);
            fnorm.push_back(dc.force_norm);
            lstar.push_back(dc.lambda_star);
            bound.push_back(dc.force_norm / dc.gap());
            nw.push_back(cloud_norm(a.cloud));
            nt.push_back(cloud_norm(am.cloud));
        }
    }
    ResultTable& t = out.table = ResultTable("bounds");
    t.add_column("lambda", lam);
    t.add_column("scale", scale);
    t.add_column("force_norm", fnorm);
    t.add_column("lambda_star", lstar);
    t.add_column("bound", bound);
    t.add_column("norm_window", nw);
    t.add_column("norm_truncated", nt);
    t.add_column("slack", std::vector<double>(lam.size(), 2.0 * cfg.attractor.stabilization_tol));
    t.summary["eps"] = cfg.bounds.eps;
    t.summary["m"] = static_cast<double>(cfg.bounds.m);
    prov.finished_utc = utc_now();
    t.provenance = prov;
    return out;
}

ExperimentOutput run_experiment(const std::string& name, const ExperimentConfig& cfg) {
    if (name == "converge-eps") return run_eps_convergence(cfg);
    if (name == "converge-dim") return run_dim_convergence(cfg);
    if (name == "converge-noise") return run_noise_convergence(cfg);
    if (name == "error-order") return run_error_order(cfg);
    if (name == "bounds") return run_bounds(cfg);
    throw ConfigError("unknown experiment '" + name + "'");
}

} // namespace bhl
