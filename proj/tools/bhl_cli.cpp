// Command-line front end for the lattice simulation library.

#include "bhl/attractor.hpp"
#include "bhl/diagnostics.hpp"
#include "bhl/error.hpp"
#include "bhl/experiment_config.hpp"
#include "bhl/experiments.hpp"
#include "bhl/hash.hpp"
#include "bhl/kernels.hpp"
#include "bhl/result_table.hpp"
#include "bhl/stochastic.hpp"
#include "bhl/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    int threads = 0;
    std::string format = "csv";
};

bhl::ExperimentConfig load(const Globals& g) {
    bhl::ExperimentConfig cfg = g.config.empty() ? bhl::default_config() : bhl::load_config(g.config);
    if (g.seed) cfg.master_seed = *g.seed;
    if (!g.out.empty()) cfg.output_dir = g.out;
    return cfg;
}

void write_table(const bhl::ResultTable& t, const Globals& g, const fs::path& dir) {
    t.write(dir);
    if (g.format == "json") {
        json cols = json::object();
        for (const auto& name : t.column_names()) cols[name] = t.column(name);
        const json doc = {{"table", t.name()},
                          {"columns", cols},
                          {"summary", t.summary},
                          {"config_hash", t.provenance.config_hash},
                          {"code_version", t.provenance.code_version}};
        std::ofstream(dir / (t.name() + ".json")) << doc.dump(2) << '\n';
    }
    std::cout << "wrote " << (dir / (t.name() + ".csv")).string() << " (" << t.rows() << " rows)\n";
    for (const auto& [k, v] : t.summary) std::cout << "  " << k << " = " << bhl::format_g17(v) << '\n';
}

void write_output(const bhl::ExperimentOutput& o, const Globals& g, const fs::path& dir) {
    write_table(o.table, g, dir);
    for (const auto& [tag, cloud] : o.clouds) bhl::save_cloud(cloud, dir / ("cloud_" + tag + ".json"));
}

void print_warnings() {
    using bhl::Warning;
    for (int w = 0; w < static_cast<int>(Warning::count_); ++w) {
        const auto n = bhl::warning_count(static_cast<Warning>(w));
        if (n > 0) std::cerr << "warning: " << bhl::warning_name(static_cast<Warning>(w)) << " x" << n << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Burgers-Huxley lattice simulations: attractors, convergence studies, noise"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "JSON experiment config (defaults when omitted)");
    app.add_option("--seed", g.seed, "Master seed (overrides the config)");
    app.add_option("--out", g.out, "Output directory (overrides the config)");
    app.add_option("--threads", g.threads, "Worker threads (0 = OpenMP default)");
    app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}));

    auto* sim = app.add_subcommand("simulate", "Run one implicit Euler trajectory");
    double sim_eps = 0.0, sim_amp = 1.0;
    std::size_t sim_steps = 100;
    sim->add_option("--eps", sim_eps, "Time step (default: first eps of the grid)");
    sim->add_option("--steps", sim_steps, "Number of steps");
    sim->add_option("--amplitude", sim_amp, "Initial state amplitude * e_0");

    auto* att = app.add_subcommand("attractor", "Approximate one attractor and save its cloud");
    double att_eps = 0.0;
    bhl::Index att_m = 0;
    bool att_ref = false;
    att->add_option("--eps", att_eps, "Time step (default: first eps of the grid)");
    att->add_option("--m", att_m, "Use the truncated system of half-width m");
    att->add_flag("--reference", att_ref, "Use the continuous flow instead of implicit Euler");

    for (const char* name : {"converge-eps", "converge-dim", "converge-noise", "error-order", "bounds"}) {
        app.add_subcommand(name, std::string("Run the ") + name + " experiment");
    }

    auto* ou = app.add_subcommand("ou-path", "Sample one Ornstein-Uhlenbeck path");
    double ou_tmin = -10.0, ou_tmax = 0.0, ou_h = 0.01;
    ou->add_option("--t-min", ou_tmin, "Start of the path");
    ou->add_option("--t-max", ou_tmax, "End of the path");
    ou->add_option("--step", ou_h, "Grid spacing");

    auto* ver = app.add_subcommand("verify", "Run every property suite and write a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    int status = 0;
    try {
        if (g.threads > 0) bhl::kernels::set_threads(g.threads);
        bhl::ExperimentConfig cfg = load(g);
        const fs::path dir = cfg.output_dir;
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();

        if (sub == ver) {
            const bhl::VerifyReport rep = bhl::run_verify(cfg);
            fs::create_directories(dir);
            std::ofstream(dir / "verify_report.json") << rep.to_json().dump(2) << '\n';
            for (const auto& c : rep.checks) {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << '\n';
                if (!c.passed) std::cout << "  witness: " << c.witness.dump() << '\n';
            }
            status = rep.all_passed() ? 0 : 1;
        } else if (sub == ou) {
            const std::uint64_t seed = bhl::derive_seed(cfg.master_seed, bhl::fnv1a64("ou-path"));
            const bhl::OUPath path = bhl::ou_path(g.seed.value_or(seed), ou_tmin, ou_tmax, ou_h);
            fs::create_directories(dir);
            if (g.format == "json") {
                bhl::save_ou_path(path, dir / "ou_path.json");
                std::cout << "wrote " << (dir / "ou_path.json").string() << '\n';
            } else {
                bhl::ResultTable t("ou_path");
                std::vector<double> ts(path.z.size());
                for (std::size_t j = 0; j < ts.size(); ++j) ts[j] = path.time(j);
                t.add_column("t", ts);
                t.add_column("z", path.z);
                t.summary["seed"] = static_cast<double>(path.seed);
                t.provenance = {bhl::config_hash(cfg), bhl::code_version(), bhl::utc_now(), bhl::utc_now()};
                write_table(t, g, dir);
            }
        } else if (sub == sim) {
            bhl::validate(cfg);
            const double eps = sim_eps > 0.0 ? sim_eps : cfg.grids.eps_list.front();
            const bhl::Trajectory tr = bhl::run_trajectory(cfg.params, bhl::step_config(cfg, eps),
                                                           bhl::LatticeWindow::unit(0, sim_amp), sim_steps);
            std::vector<double> n, nrm, res, it, clip;
            for (std::size_t k = 0; k < tr.states.size(); ++k) {
                n.push_back(static_cast<double>(k));
                nrm.push_back(bhl::norm(tr.states[k]));
                res.push_back(k ? tr.reports[k - 1].residual : 0.0);
                it.push_back(k ? tr.reports[k - 1].iterations : 0.0);
                clip.push_back(k ? tr.reports[k - 1].clipped_mass : 0.0);
            }
            bhl::ResultTable t("simulate");
            t.add_column("n", n);
            t.add_column("norm", nrm);
            t.add_column("residual", res);
            t.add_column("iterations", it);
            t.add_column("clipped_mass", clip);
            t.summary["eps"] = eps;
            t.provenance = {bhl::config_hash(cfg), bhl::code_version(), bhl::utc_now(), bhl::utc_now()};
            write_table(t, g, dir);
        } else if (sub == att) {
            bhl::validate(cfg);
            const double eps = att_eps > 0.0 ? att_eps : cfg.grids.eps_list.front();
            const bhl::DerivedConstants dc = bhl::derived_constants(cfg.params);
            const bhl::Space space =
                att_m > 0 ? bhl::Space::truncated(att_m) : bhl::Space::window(cfg.window_half_width);
            const bhl::CloudStepper st =
                att_ref ? bhl::reference_flow_stepper(cfg.params, space, eps, cfg.reference.dt_ref)
                        : bhl::implicit_euler_stepper(cfg.params, bhl::step_config(cfg, eps), space);
            bhl::AttractorConfig ac = cfg.attractor;
            ac.seed = bhl::stream_seed(cfg, "attractor");
            const bhl::AttractorResult r = bhl::attractor_approx(st, ac, dc.r_star);
            fs::create_directories(dir);
            const std::string tag = std::string(att_ref ? "reference" : "implicit") +
                                    (att_m > 0 ? "_m" + std::to_string(att_m) : "_window");
            bhl::save_cloud(r.cloud, dir / ("cloud_" + tag + ".json"));
            bhl::ResultTable t("attractor");
            t.add_column("round", [&] {
                std::vector<double> v;
                for (std::size_t k = 1; k <= r.round_distances.size(); ++k) v.push_back(static_cast<double>(k));
                return v;
            }());
            t.add_column("round_distance", r.round_distances);
            t.summary["eps"] = eps;
            t.summary["norm"] = bhl::cloud_norm(r.cloud);
            t.summary["steps"] = static_cast<double>(r.cloud.meta.steps_evolved);
            t.summary["r_star"] = dc.r_star;
            t.provenance = {bhl::config_hash(cfg), bhl::code_version(), bhl::utc_now(), bhl::utc_now()};
            write_table(t, g, dir);
        } else {
            write_output(bhl::run_experiment(name, cfg), g, dir);
        }
    } catch (const bhl::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what();
        if (e.step_index) std::cerr << " (step " << *e.step_index << ")";
        std::cerr << '\n';
        status = 3;
    } catch (const bhl::Error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        status = 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        status = 1;
    }
    print_warnings();
    return status;
}
