#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"

#include "ppbell/error.hpp"
#include "ppbell/runs.hpp"

using namespace ppbell;

TEST_SUITE("output") {
  TEST_CASE("float formatting has nine significant digits") {
    CHECK(format_float((std::sqrt(2.0) + 1) / 2) == "1.20710678e+00");
    CHECK(format_float(-0.000123456789) == "-1.23456789e-04");
    CHECK(format_float(0.0) == "0.00000000e+00");
    CHECK(format_float(std::nan("")) == "nan");
    CHECK(format_float(-INFINITY) == "-inf");
  }

  TEST_CASE("table rendering") {
    CsvTable t;
    t.header = {"phi", "name", "n"};
    t.add_row({0.5, std::string("x"), std::uint64_t{7}});
    CHECK_THROWS(t.add_row({1.0}));
    CHECK(t.render("out.csv.manifest.json") == "# manifest: out.csv.manifest.json\nphi,name,n\n5.00000000e-01,x,7\n");
    CHECK(t.number(0, 2) == 7.0);
    CHECK_THROWS(t.number(0, 1));
    CHECK(t.column("n") == 2);
    CHECK_THROWS(t.column("missing"));
    CHECK(manifest_path_for("a/b.csv") == "a/b.csv.manifest.json");
  }

  TEST_CASE("exit codes") {
    RunResult r;
    CHECK(r.exit_code() == kExitOk);
    r.checks_passed = false;
    CHECK(r.exit_code() == kExitFailure);
    r.imag_violations.push_back("row");
    CHECK(r.exit_code() == kExitImagResidual);
  }

  TEST_CASE("static run table and manifest") {
    StaticChdConfig c;
    c.phis = {0.1, 0.3};
    c.n_samples = 1 << 13;
    c.seed = 9;
    const RunResult r = run_static_chd(c, {1});
    CHECK(r.table.header.front() == "phi");
    CHECK(r.table.header[1] == "S_CHD");
    REQUIRE(r.table.rows.size() == 2);
    const auto m = nlohmann::json::parse(r.manifest("static.csv"));
    CHECK(m["command"] == "static-chd");
    CHECK(m["output"] == "static.csv");
    CHECK(m["seed"] == 9);
    CHECK(m.contains("wall_time_s"));
    CHECK(r.csv("static.csv.manifest.json").rfind("# manifest: static.csv.manifest.json\n", 0) == 0);
    const RunResult again = run_static_chd(c, {3});
    CHECK(again.csv("x") == r.csv("x"));
  }

  TEST_CASE("configuration errors surface before compute") {
    StaticChdConfig s;
    s.pairs = 0;
    CHECK_THROWS_AS(run_static_chd(s), ConfigError);
    s = StaticChdConfig{};
    s.n_samples = 100;
    CHECK_THROWS_AS(run_static_chd(s), ConfigError);
    DynamicRunConfig d;
    d.statistic = DynamicStatistic::Chd;
    d.postselect = true;
    CHECK_THROWS_AS(run_dynamic(d), ConfigError);
    d = DynamicRunConfig{};
    d.taus = {0.1, 0.05};
    CHECK_THROWS_AS(run_dynamic(d), ConfigError);
    d = DynamicRunConfig{};
    d.taus = {1.5};
    CHECK_THROWS_AS(run_dynamic(d), ConfigError);
  }

  TEST_CASE("loss-only waveguide run reports its check") {
    WaveguideConfig c;
    c.kappa = 0.0;
    c.gamma_loss = 1.5;
    c.seed_amplitude = 0.6;
    c.n_traj = 1 << 11;
    c.z_end = 0.02;
    c.record_z = {0.02};
    const RunResult r = run_waveguide(c, {1});
    bool found = false;
    for (const auto& n : r.notes) found = found || n.rfind("loss check: PASS", 0) == 0;
    CHECK(found);
    CHECK(r.exit_code() == kExitOk);
  }

  TEST_CASE("selftest passes") {
    const RunResult r = run_selftest({1 << 14, 1 << 12, 1}, {1});
    CHECK(r.checks_passed);
    CHECK(r.table.header.front() == "check");
  }
}
