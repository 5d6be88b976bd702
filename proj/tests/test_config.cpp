#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "lsmp/config.hpp"

using namespace lsmp;

namespace {
const char* kSample = R"(# sample
[model]
gamma = 0.5
sigma_D = 0.2
A = 2

[simulation]
dt = 0.1
seed = 99
)";
}

TEST_CASE("basic parse and typed getters") {
    const Config c = Config::parse_string(kSample, "sample.ini");
    CHECK(c.get_double("model", "gamma") == 0.5);
    CHECK(c.get_double("model", "A", 7.0) == 2.0);
    CHECK(c.get_u64("simulation", "seed", 1) == 99);
    CHECK(c.get_double("missing", "key", 3.5) == 3.5);
    CHECK(c.has("simulation", "dt"));
    CHECK_FALSE(c.has("simulation", "horizon"));
}

TEST_CASE("parse errors carry file and line") {
    using doctest::Contains;
    CHECK_THROWS_WITH(Config::parse_string("[model]\ngamma 0.5\n", "x.ini"),
                      Contains("x.ini:2"));
    CHECK_THROWS_WITH(Config::parse_string("gamma = 0.5\n", "x.ini"),
                      Contains("before any [section]"));
    CHECK_THROWS_WITH(Config::parse_string("[model\ngamma = 0.5\n", "x.ini"),
                      Contains("malformed section header"));
    CHECK_THROWS_WITH(Config::parse_string("[m]\na = 1\na = 2\n", "x.ini"),
                      Contains("duplicate key 'a'"));
    CHECK_THROWS_WITH(Config::parse_string("[m]\na = 1\na = 2\n", "x.ini"),
                      Contains("first at line 2"));
}

TEST_CASE("value errors point at the source line") {
    using doctest::Contains;
    const Config c = Config::parse_string("[m]\nx = abc\nn = 1.5\n", "v.ini");
    CHECK_THROWS_WITH(c.get_double("m", "x", 0.0), Contains("v.ini:2"));
    CHECK_THROWS_WITH(c.get_double("m", "x", 0.0), Contains("expected a number"));
    CHECK_THROWS_WITH(c.get_int("m", "n", 0), Contains("v.ini:3"));
    CHECK_THROWS_WITH(c.get_u64("m", "n", 0), Contains("trailing characters after integer"));
}

TEST_CASE("overrides beat file values and add new keys") {
    Config c = Config::parse_string(kSample, "sample.ini");
    c.apply_override("simulation.dt=0.05");
    c.apply_override("simulation.horizon=400");
    CHECK(c.get_double("simulation", "dt") == 0.05);
    CHECK(c.get_double("simulation", "horizon") == 400.0);
    CHECK_THROWS_WITH(c.apply_override("nodot=3"), doctest::Contains("section.key=value"));
    CHECK_THROWS_WITH(c.apply_override("a.=3"), doctest::Contains("section.key=value"));
    CHECK_THROWS_WITH(c.apply_override("justtext"), doctest::Contains("section.key=value"));
}

TEST_CASE("unconsumed keys are rejected with their location") {
    using doctest::Contains;
    const Config c = Config::parse_string("[m]\nused = 1\nstray = 2\n", "r.ini");
    CHECK(c.get_double("m", "used", 0.0) == 1.0);
    CHECK_THROWS_WITH(c.reject_unconsumed(), Contains("unknown key 'stray'"));
    CHECK_THROWS_WITH(c.reject_unconsumed(), Contains("r.ini:3"));
}

TEST_CASE("double lists split on commas and whitespace") {
    const Config c = Config::parse_string("[s]\nxi = 0.15, 0.152 0.1522\nbad = 1, x\n", "l.ini");
    const std::vector<double> xs = c.get_double_list("s", "xi");
    REQUIRE(xs.size() == 3);
    CHECK(xs[0] == 0.15);
    CHECK(xs[2] == 0.1522);
    CHECK_THROWS_WITH(c.get_double_list("s", "bad"), doctest::Contains("expected a number"));
}

TEST_CASE("run configs per mode") {
    SUBCASE("defaults only") {
        const Config c = Config::parse_string("", "<defaults>");
        const RunConfig rc = assemble_run_config(c, "find-critical");
        CHECK(rc.gamma == 0.5);
        CHECK(rc.A == 2.0);
        CHECK(rc.xi_tol == 1e-12);
        CHECK_FALSE(rc.economy.has_value());
    }
    SUBCASE("A derived from the economy block") {
        const Config c = Config::parse_string(
            "[economy]\nbeta = 0.1\nmu_D = 0.05\nD0 = 1\n", "e.ini");
        const RunConfig rc = assemble_run_config(c, "equilibrium");
        CHECK(rc.A == doctest::Approx(5.0).epsilon(1e-12));
        REQUIRE(rc.economy.has_value());
        CHECK(rc.economy->beta == 0.1);
    }
    SUBCASE("model.A contradicting the economy is an error") {
        const Config c = Config::parse_string(
            "[model]\nA = 3\n[economy]\nbeta = 0.1\nmu_D = 0.05\n", "e.ini");
        CHECK_THROWS_WITH(assemble_run_config(c, "equilibrium"), doctest::Contains("contradicts"));
    }
    SUBCASE("solve-ode requires xi") {
        const Config c = Config::parse_string("[model]\nA = 2\n", "e.ini");
        CHECK_THROWS_WITH(assemble_run_config(c, "solve-ode"), doctest::Contains("model.xi"));
    }
    SUBCASE("simulate block round trip with overrides") {
        Config c = Config::parse_string(
            "[economy]\nbeta = 0.025\nmu_D = 0.02\n[simulation]\ndt = 0.1\nseed = 7\n", "s.ini");
        c.apply_override("simulation.seed=123");
        const RunConfig rc = assemble_run_config(c, "simulate");
        CHECK(rc.sim.seed == 123);       // override beat the file
        CHECK(rc.sim.dt == 0.1);         // file value survives
        CHECK(rc.sim.n_paths == 100000); // default
        CHECK(rc.Y0 == 0.5);
    }
    SUBCASE("unknown keys for the mode are rejected") {
        const Config c = Config::parse_string("[sweep]\nxi = 0.1\n", "w.ini");
        CHECK_THROWS_WITH(assemble_run_config(c, "find-critical"),
                          doctest::Contains("unknown key 'xi'"));
        CHECK_NOTHROW(assemble_run_config(c, "sweep"));
    }
    SUBCASE("out-of-range values") {
        CHECK_THROWS_WITH(
            assemble_run_config(Config::parse_string("[model]\ngamma = 1.5\n", "g.ini"), "sweep"),
            doctest::Contains("gamma"));
        CHECK_THROWS_WITH(
            assemble_run_config(
                Config::parse_string("[simulation]\nY0 = 1.5\n[economy]\nbeta=0.025\nmu_D=0.02\n",
                                     "y.ini"),
                "simulate"),
            doctest::Contains("Y0"));
    }
}

TEST_CASE("output directory resolution order") {
    // [output] dir wins over the environment; the environment wins over the
    // built-in default.  (--out is applied upstream as an output.dir override.)
    unsetenv("LSMP_OUT_DIR");
    const Config none = Config::parse_string("", "<defaults>");
    CHECK(assemble_run_config(none, "find-critical").out_dir == "out");

    setenv("LSMP_OUT_DIR", "/tmp/envdir", 1);
    CHECK(assemble_run_config(none, "find-critical").out_dir == "/tmp/envdir");

    const Config with_dir = Config::parse_string("[output]\ndir = data\n", "o.ini");
    CHECK(assemble_run_config(with_dir, "find-critical").out_dir == "data");
    unsetenv("LSMP_OUT_DIR");
}
