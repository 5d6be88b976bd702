#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lsmp/riccati.hpp"

using namespace lsmp;

// The constant-a3 family has closed-form endpoints f(1) = -gamma/a3, which is
// what makes it the comparison oracle for the path-dependent problem.

TEST_CASE("stationary solution a3 = -1") {
    // f == gamma/(2 gamma - ... ) degenerates: the constant 0.5 solves the
    // ODE identically at gamma = 0.5, so every evaluation returns 0.5.
    CHECK(stationary_value(0.5, -1.0, 0.3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(stationary_value(0.5, -1.0, 0.97) == doctest::Approx(0.5).epsilon(1e-15));
    const SolutionGrid g = solve_constant_riccati({0.5, -1.0}, IntegratorConfig{});
    CHECK(g.min_h() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.max_h() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("extrapolated endpoints hit -gamma/a3") {
    const IntegratorConfig cfg;
    struct Row {
        double a3, f1;
    };
    for (const Row r : {Row{-0.5, 1.0}, Row{-0.75, 2.0 / 3.0}, Row{-1.0, 0.5}}) {
        const SolutionGrid g = solve_constant_riccati({0.5, r.a3}, cfg);
        CHECK(std::abs(riccati_endpoint(g) - r.f1) < 1e-6);
    }
}

TEST_CASE("bound suites hold at every accepted node") {
    const IntegratorConfig cfg;
    for (double a3 : {-0.5, -0.6, -0.75, -0.9, -1.0}) {
        const SolutionGrid g = solve_constant_riccati({0.5, a3}, cfg);
        CHECK(g.min_h() >= 0.5 - 1e-9);   // f >= gamma on [-1, -gamma]
        CHECK(g.max_h() <= 1.0 + 1e-12);  // f <= 1 always
        if (a3 < -0.5) CHECK(g.max_h() < 1.0);  // strict below the borderline case
    }
}

TEST_CASE("strict comparison between coefficient levels") {
    // More negative a3 pushes the solution down: f_a < f_b pointwise for a < b.
    const IntegratorConfig cfg;
    const SolutionGrid fa = solve_constant_riccati({0.5, -1.0}, cfg);
    const SolutionGrid fb = solve_constant_riccati({0.5, -0.6}, cfg);
    for (double y = 0.05; y <= 0.95; y += 0.05) CHECK(fa.eval_h(y) < fb.eval_h(y));
}

TEST_CASE("restart from an interior node reproduces the trajectory") {
    const IntegratorConfig cfg;
    const SolutionGrid g0 = solve_constant_riccati({0.5, -0.75}, cfg);

    // pick the first stored node past y = 0.3 and re-integrate from it
    const auto& pts = g0.points();
    std::size_t k = 0;
    while (pts[k].y < 0.3) ++k;
    const AugmentedState node = pts[k];
    const TrajectoryOutcome rerun = integrate_model(0.5, QuadCoeff::constant(-0.75), node,
                                                    /*slope=*/0.0, cfg, /*stop_at_one=*/false);
    REQUIRE(rerun.completed());

    double max_diff = 0.0;
    for (double y = node.y + 0.01; y < 0.99; y += 0.01)
        max_diff = std::max(max_diff, std::abs(rerun.grid.eval_h(y) - g0.eval_h(y)));
    CHECK(max_diff <= 10.0 * cfg.rel_tol);
    CHECK(std::abs(riccati_endpoint(rerun.grid) - 2.0 / 3.0) < 1e-6);
}

TEST_CASE("parameter domain") {
    CHECK_THROWS_AS(ConstantRiccatiParams(0.5, -0.4), std::invalid_argument);  // a3 > -gamma
    CHECK_THROWS_AS(ConstantRiccatiParams(1.5, -2.0), std::invalid_argument);
    CHECK_NOTHROW(ConstantRiccatiParams(0.5, -0.5));
}

TEST_CASE("appendix diagnostics: slope divergence and tail stabilization") {
    const AppendixReport rep = appendix_diagnostics(0.5, IntegratorConfig{});

    // f'(1-eps) grows without bound along eps = 1e-2 .. 1e-6
    REQUIRE(rep.slope.size() == 5);
    CHECK(rep.slopes_increasing);
    for (std::size_t i = 1; i < rep.slope.size(); ++i) CHECK(rep.slope[i] > rep.slope[i - 1]);
    CHECK(rep.slope.front() == doctest::Approx(6.18616).epsilon(1e-4));
    CHECK(rep.slope.back() == doctest::Approx(1017.31).epsilon(1e-4));

    // the tail integral of (1-f)/(1-q) converges; its increments decay like
    // eps^gamma, so the 1e-3 stabilization shows up at the {1e-7, 1e-8} pair
    for (std::size_t i = 1; i < rep.tail_integral.size(); ++i)
        CHECK(rep.tail_integral[i] > rep.tail_integral[i - 1]);
    CHECK(rep.tail_integral.back() == doctest::Approx(1.89590940123).epsilon(1e-9));
    CHECK(rep.fitted_tail_rate == doctest::Approx(0.5).epsilon(0.1));
    CHECK(rep.fine_pair_change < 1e-3);
    CHECK(rep.fine_pair_change > 1e-4);  // it is a gamma-rate tail, not exact

    // total variation accumulates but stays finite
    for (std::size_t i = 1; i < rep.total_variation.size(); ++i)
        CHECK(rep.total_variation[i] > rep.total_variation[i - 1]);
    CHECK(rep.total_variation.back() < 0.5);

    CHECK(rep.f_near_one_ok);
    CHECK(std::abs(rep.f_near_one - 1.0) < 3e-3);
}
