#include "bhl/error.hpp"
#include "bhl/experiment_config.hpp"
#include "bhl/experiments.hpp"
#include "bhl/hash.hpp"
#include "bhl/result_table.hpp"
#include "bhl/verify.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bhl;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ExperimentConfig small() {
    ExperimentConfig c = default_config();
    c.window_half_width = 10;
    c.grids.eps_list = {0.02, 0.01};
    c.grids.m_list = {2, 4};
    c.grids.sigma_list = {0.2, 0.0};
    c.attractor.sample_count = 6;
    c.reference.eps_ref = 0.002;
    c.reference.dt_ref = 0.002;
    c.noise.realizations = 3;
    c.noise.pullback_T = 4.0;
    c.noise_experiment.m = 4;
    c.noise_experiment.cloud_size = 3;
    c.error_order.samples = 2;
    c.error_order.support = 3;
    c.bounds.m = 4;
    c.bounds.lambda_list = {8.0, 12.0};
    c.bounds.force_scales = {1.0, 0.0};
    return c;
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("bhl_test_" + name);
    fs::remove_all(d);
    return d;
}

} // namespace

TEST_CASE("default configuration is valid") {
    const ExperimentConfig c = default_config();
    CHECK_NOTHROW(validate(c));
    const DerivedConstants dc = derived_constants(c.params);
    for (double e : c.grids.eps_list) CHECK(e <= dc.eps_star);
    CHECK(c.params.f == LatticeWindow::unit(0, 0.08984375));
    CHECK(step_config(c, 0.01).max_half_width == c.window_half_width);
    CHECK(step_config(c, 0.01).fp_tol == c.solver.fp_tol);
}

TEST_CASE("structural and derived validation are separate") {
    ExperimentConfig c = default_config();
    c.params.lambda = lambda_star(c.params);
    CHECK_NOTHROW(validate_structure(c));
    CHECK_THROWS_AS(validate(c), DissipativityViolation);

    c = default_config();
    c.grids.m_list = {16, 8};
    CHECK_THROWS_AS(validate_structure(c), ConfigError);
    c = default_config();
    c.reference.eps_ref = 0.001;
    CHECK_THROWS_AS(validate_structure(c), ConfigError);
    c = default_config();
    c.grids.eps_list = {0.5};
    CHECK_NOTHROW(validate_structure(c));
    CHECK_THROWS_AS(validate(c), StepTooLarge);
}

TEST_CASE("config JSON round trip and strict keys") {
    ExperimentConfig c = small();
    c.params.f = LatticeWindow(-1, {0.01, 0.05, 0.02});
    c.solver.solver = InnerSolver::newton;
    c.noise.integrator = PathIntegrator::implicit_euler;
    c.master_seed = 123;
    const ExperimentConfig back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(config_hash(back) == config_hash(c));

    CHECK_THROWS_AS(config_from_json(json{{"colour", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"grids", {{"eps", {0.1}}}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"window_half_width", "wide"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"solver", {{"inner", "jacobi"}}}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);

    // Partial documents merge over the defaults.
    const ExperimentConfig part = config_from_json(json{{"params", {{"lambda", 9.0}}}});
    CHECK(part.params.lambda == 9.0);
    CHECK(part.params.f == default_config().params.f);
    const ExperimentConfig nof = config_from_json(json{{"params", {{"f", {{"offset", 0}, {"values", json::array()}}}}}});
    CHECK(nof.params.f.is_zero());
}

TEST_CASE("config hash ignores the output directory only") {
    ExperimentConfig a = default_config();
    ExperimentConfig b = a;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.master_seed += 1;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("config files load from disk") {
    const fs::path d = scratch("cfg");
    fs::create_directories(d);
    std::ofstream(d / "good.json") << R"({"dim_eps": 0.005})";
    std::ofstream(d / "bad.json") << R"({"dim_eps": )";
    CHECK(load_config(d / "good.json").dim_eps == 0.005);
    CHECK_THROWS_AS(load_config(d / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_config(d / "missing.json"), ConfigError);
    fs::remove_all(d);
}

TEST_CASE("result tables write exact CSV and check provenance") {
    ResultTable t("demo");
    t.add_column("x", {0.1, 1.0 / 3.0, 1e-300});
    t.add_column("y", {-2.0, 0.0, 6.02214076e23});
    t.summary["slope"] = 1.5;
    t.provenance = {"abc123", code_version(), utc_now(), utc_now()};
    CHECK(t.rows() == 3);
    CHECK_THROWS_AS(t.add_column("z", {1.0}), ConfigError);
    CHECK_THROWS_AS(t.add_column("x", {1.0, 2.0, 3.0}), ConfigError);

    const std::string csv = t.to_csv();
    CHECK(csv.rfind("x,y\n", 0) == 0);
    CHECK(csv.find("0.33333333333333331") != std::string::npos);

    const fs::path d = scratch("table");
    t.write(d);
    CHECK(fs::exists(d / "demo.csv"));
    CHECK(fs::exists(d / "demo.meta.json"));
    const ResultTable back = ResultTable::read(d, "demo", "abc123");
    CHECK(back.column("x") == t.column("x"));
    CHECK(back.column("y") == t.column("y"));
    CHECK(back.summary.at("slope") == 1.5);
    CHECK_THROWS_AS(ResultTable::read(d, "demo", "ffff"), ConfigError);

    std::ofstream(d / "demo.csv", std::ios::app) << "9,9\n";
    CHECK_THROWS_AS(ResultTable::read(d, "demo", "abc123"), ConfigError);
    fs::remove_all(d);
}

TEST_CASE("trend helpers") {
    const std::vector<double> v{1.0, 1.05, 0.5, 0.6};
    CHECK(!first_increase(std::span<const double>(v.data(), 3), 0.1, 0.0));
    const auto bad = first_increase(v, 0.1, 0.0);
    REQUIRE(bad);
    CHECK(bad->row == 3);
    CHECK(bad->allowed == doctest::Approx(0.55));
    CHECK(!first_increase(v, 0.1, 0.05));

    const std::vector<double> m{3.0, 2.0, 2.2};
    CHECK(first_increase_se(m, std::vector<double>{0.1, 0.1, 0.1}));
    CHECK(!first_increase_se(m, std::vector<double>{0.1, 0.1, 0.3}));

    const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(3.0 * xi * xi);
    CHECK(loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("named seed streams are distinct and stable") {
    const ExperimentConfig c = default_config();
    CHECK(stream_seed(c, "a") == stream_seed(c, "a"));
    CHECK(stream_seed(c, "a") != stream_seed(c, "b"));
    CHECK(stream_seed(c, "a") == derive_seed(c.master_seed, fnv1a64("a")));
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("experiments are reproducible and self-describing") {
    const ExperimentConfig c = small();
    const ExperimentOutput a = run_eps_convergence(c);
    const ExperimentOutput b = run_eps_convergence(c);
    CHECK(a.table.to_csv() == b.table.to_csv());
    CHECK(a.table.rows() == 2);
    CHECK(a.table.provenance.config_hash == config_hash(c));
    CHECK(a.table.column("rel_slack").front() == c.trend.rel_slack);
    CHECK(a.table.summary.at("trend_ok") == 1.0);
    for (double d : a.table.column("d_semi")) CHECK(d <= 1e-6);
}

TEST_CASE("every experiment runs on a small configuration") {
    const ExperimentConfig c = small();
    for (const char* name : {"converge-dim", "converge-noise", "error-order", "bounds"}) {
        CAPTURE(name);
        const ExperimentOutput o = run_experiment(name, c);
        CHECK(o.table.rows() > 0);
    }
    CHECK_THROWS_AS(run_experiment("nope", c), ConfigError);
}

TEST_CASE("bounds without force give the zero attractor") {
    ExperimentConfig c = small();
    c.bounds.force_scales = {0.0};
    const ResultTable t = run_bounds(c).table;
    for (double n : t.column("norm_window")) CHECK(n <= 1e-6);
    for (double n : t.column("norm_truncated")) CHECK(n <= 1e-6);
}

TEST_CASE("verify passes on the defaults and stops at lambda_star") {
    const VerifyReport ok = run_verify(default_config());
    for (const auto& chk : ok.checks) {
        CAPTURE(chk.name);
        CHECK(chk.passed);
    }
    CHECK(ok.all_passed());
    CHECK(ok.to_json().at("checks").size() == ok.checks.size());

    ExperimentConfig bad = default_config();
    bad.params.lambda = lambda_star(bad.params);
    const VerifyReport rep = run_verify(bad);
    CHECK(!rep.all_passed());
    REQUIRE(!rep.checks.empty());
    CHECK(rep.checks.front().name == "params.dissipativity");
    CHECK(!rep.checks.front().passed);
}
