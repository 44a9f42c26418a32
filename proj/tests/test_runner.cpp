#include <doctest.h>

#include "emsim/errors.hpp"
#include "emsim/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

using namespace emsim;

namespace {

std::string meta(const ResultTable& t, const std::string& key) {
    for (const auto& [k, v] : t.metadata) {
        if (k == key) return v;
    }
    return {};
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("empty fig3a config takes the published defaults") {
    const ExperimentConfig c = validate_config("", "fig3a");
    CHECK(c.system.omega1_mhz == 85.0);
    CHECK(c.system.omega2_mhz == 75.0);
    CHECK(c.system.nl1.strength_mhz == 3.0);
    CHECK(c.system.g1_mhz == 6.0);
    CHECK(c.system.gamma1_hz == 50.0);
    CHECK(c.system.gammaTR_hz == 1e5);
    CHECK(c.sweep("gamma_nr_d_hz").size() == 8);
    CHECK(c.sweep("gamma_tr_d_hz").size() == 8);
    bool annotated = true;
    for (const auto& p : c.provenance) annotated = annotated && !p.source.empty();
    CHECK(annotated);
}

TEST_CASE("config keys, overrides and fast mode") {
    const ExperimentConfig c = validate_config(
        "# comment\nexperiment = fig4\nsystem.g1_mhz = 5.5   # trailing\nsweep.delta_mhz = 1, 2,3\nparam.leakage_samples = 4\n"
        "integrator.frame = interaction\nrun.fast = true\n");
    CHECK(c.experiment == "fig4");
    CHECK(c.system.g1_mhz == 5.5);
    CHECK(c.system.gamma1_hz == 0.0);  // this experiment runs without dissipation
    CHECK(c.sweep("delta_mhz") == std::vector<double>{1, 2, 3});
    CHECK(c.param("leakage_samples") == 4.0);
    CHECK(c.integrator.frame == Frame::Interaction);
    CHECK(c.fast);
    CHECK(c.integrator.step_relax == 4.0);
    CHECK(validate_config("", "fig3b", true).sweep("gamma_nr_d_hz").size() == 3);
    CHECK(validate_config("", "fig5a").gate.drive_amplitude_mhz == 0.5);
}

TEST_CASE("config diagnostics carry line and column") {
    auto error_at = [](const std::string& text, int line, int column) {
        try {
            validate_config(text, "fig3a");
        } catch (const ConfigError& e) {
            CHECK(e.line() == line);
            CHECK(e.column() == column);
            return;
        }
        FAIL("no ConfigError for: " << text);
    };
    error_at("\nsystem.gamma1_hz = -1\n", 2, 20);
    error_at("system.nope = 1\n", 1, 1);
    error_at("  sweep.gamma_nr_d_hz = 3, 2\n", 1, 25);
    error_at("sweep.gamma_nr_d_hz = 1, inf\n", 1, 23);
    error_at("system.g1_mhz 6\n", 1, 1);
    error_at("system.g1_mhz = 6\nsystem.g1_mhz = 7\n", 2, 1);
    error_at("param.points = 3\n", 1, 1);
    error_at("run.n_max = 2.5\n", 1, 13);
    error_at("experiment = fig4\n", 1, 14);
    try {
        validate_config("", "fig99");
        FAIL("unknown experiment accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fig5b") != std::string::npos);
    }
    CHECK_THROWS_AS(validate_config(""), ConfigError);
}

TEST_CASE("result table invariants and CSV format") {
    ResultTable t;
    t.headers = {"a", "b"};
    t.add_row({1.0, 1.0 / 3.0});
    t.metadata.emplace_back("k", "v");
    CHECK(t.to_csv() == "# k = v\na,b\n1,0.333333333333\n");
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidInput);
    t.headers = {"a", "a"};
    CHECK_THROWS_AS(t.validate(), InvalidInput);
    CHECK_THROWS_AS(t.column("z"), InvalidInput);
}

TEST_CASE("worker pool keeps input order and propagates errors") {
    const auto v = parallel_map(50, 4, [](std::size_t i) { return int(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == int(i * i));
    CHECK_THROWS_AS(parallel_map(10, 3, [](std::size_t i) -> int {
                        if (i == 7) throw NumericError("boom");
                        return 0;
                    }),
                    NumericError);
    CHECK(worker_count(3) == 3);
    setenv("EMSIM_MAX_WORKERS", "2", 1);
    CHECK(worker_count(3) == 2);
    CHECK(worker_count(0) <= 2);
    unsetenv("EMSIM_MAX_WORKERS");
}

TEST_CASE("fig2 runs deterministically and has a trivial g = 0 row") {
    const ExperimentConfig c = validate_config("sweep.g_mhz = 0, 5\nrun.workers = 2\n", "fig2");
    const ResultTable a = run_experiment(c);
    CHECK(std::abs(a.rows[0][a.column("delta_mhz")]) < 1e-9);
    CHECK(a.rows[0][a.column("sc_exc0")] < 1e-10);
    CHECK(a.rows[0][a.column("sc_exc1")] < 1e-10);
    CHECK(a.to_csv() == run_experiment(c).to_csv());
    CHECK(meta(a, "sweep.g_mhz").rfind("0,5  [config line 1]", 0) == 0);
}

TEST_CASE("fig6 and tableA experiments") {
    const ResultTable f = run_experiment(validate_config("sweep.u_over_omega = 0, 0.01\n", "fig6"));
    REQUIRE(f.rows.size() == 2);
    CHECK(f.rows[0][1] == doctest::Approx(0.0).epsilon(1e-12));
    // Kerr: delta = 2 U.
    CHECK(f.rows[1][f.column("delta_kerr_over_omega")] == doctest::Approx(0.02));
    const ResultTable a = run_experiment(validate_config("", "tableA"));
    REQUIRE(a.rows.size() == 2);
    for (const auto& r : a.rows) CHECK(r[a.column("delta_mhz")] == doctest::Approx(6.0).epsilon(1e-5));
}

}  // TEST_SUITE
