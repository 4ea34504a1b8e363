#include <cstdlib>
#include <sstream>

#include "blx/config.hpp"
#include "blx/runner.hpp"
#include "doctest.h"

using namespace blx;

TEST_CASE("ini parsing with sections and comments") {
    Config c = Config::parse_string(
        "# comment\n"
        "[dims]\n"
        "d1 = 1.5\n"
        "d2 = 3 # trailing comment\n"
        "[run]\n"
        "seed = 42\n"
        "experiments = specfun, hardy\n");
    CHECK(c.get_double("dims.d1") == 1.5);
    CHECK(c.get_double("dims.d2") == 3.0);
    CHECK(c.get_u64("run.seed") == 42);
    std::vector<std::string> ids = c.get_string_list("run.experiments");
    REQUIRE(ids.size() == 2);
    CHECK(ids[0] == "specfun");
    CHECK(ids[1] == "hardy");
}

TEST_CASE("parse errors carry the line number") {
    try {
        Config::parse_string("[dims]\nd1 1.5\n", "test.ini");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string what = e.what();
        CHECK(what.find("test.ini") != std::string::npos);
        CHECK(what.find("2") != std::string::npos);
    }
}

TEST_CASE("unknown keys are rejected by name") {
    Config c = Config::parse_string("[dims]\nd3 = 4\n");
    try {
        c.validate_keys({"dims.d1", "dims.d2"});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("dims.d3") != std::string::npos);
    }
}

TEST_CASE("merge overlays and typed getters") {
    Config base;
    base.set("a.x", "1");
    base.set("a.y", "2");
    Config over;
    over.set("a.y", "3.5");
    base.merge(over);
    CHECK(base.get_int("a.x") == 1);
    CHECK(base.get_double("a.y") == 3.5);
    CHECK_THROWS_AS(base.get_int("a.y"), ConfigError);
    CHECK_THROWS_AS(base.get_double("missing.key"), ConfigError);
    base.set("a.flag", "true");
    CHECK(base.get_bool("a.flag"));
    base.set("a.list", "1, 2.5, -3");
    std::vector<double> xs = base.get_double_list("a.list");
    REQUIRE(xs.size() == 3);
    CHECK(xs[1] == 2.5);
}

TEST_CASE("environment overrides") {
    Config c;
    c.set("grid.nodes_per_side", "100");
    setenv("BLX_GRID_NODES_PER_SIDE", "250", 1);
    c.apply_env_overrides({"grid.nodes_per_side"});
    unsetenv("BLX_GRID_NODES_PER_SIDE");
    CHECK(c.get_int("grid.nodes_per_side") == 250);
}

TEST_CASE("canonical form and hash are deterministic") {
    Config a;
    a.set("b.k", "2");
    a.set("a.k", "1");
    Config b;
    b.set("a.k", "1");
    b.set("b.k", "2");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.hash() == b.hash());
    b.set("b.k", "3");
    CHECK(a.hash() != b.hash());
    // FNV-1a reference values.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("experiment registry") {
    const std::vector<ExperimentInfo>& list = experiment_list();
    CHECK(list.size() == 13);
    for (std::size_t i = 0; i < list.size(); ++i) {
        CHECK_FALSE(list[i].claim.empty());
        for (std::size_t j = i + 1; j < list.size(); ++j)
            CHECK(list[i].id != list[j].id);
    }
    Config cfg = default_config();
    CHECK_THROWS_AS(run_one_experiment("no-such-id", cfg), ConfigError);
}

TEST_CASE("default config validates against its own schema") {
    Config cfg = default_config();
    cfg.validate_keys(config_schema());
    CHECK(cfg.get_double("dims.d1") == 1.5);
}

TEST_CASE("csv output is deterministic and carries the config hash") {
    Config cfg = default_config();
    std::vector<ResultRow> rows = run_one_experiment("specfun", cfg);
    std::ostringstream a, b;
    write_rows_csv(a, rows, cfg.hash(), "specfun");
    write_rows_csv(b, run_one_experiment("specfun", cfg), cfg.hash(),
                   "specfun");
    CHECK(a.str() == b.str());
    CHECK(a.str().find("# config_hash=") != std::string::npos);
    CHECK(a.str().find(
              "experiment,d1,d2,p,q,R,n_nodes,sup_ratio,verdict,fit_slope,"
              "fit_r2,seed,wall_ms") != std::string::npos);
    // wall_ms is pinned to zero for byte-identical reruns.
    CHECK(a.str().find(",0\n") != std::string::npos);
}
