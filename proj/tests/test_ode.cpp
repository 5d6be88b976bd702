#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lsmp/ode.hpp"

using namespace lsmp;

TEST_CASE("coefficient formulas at hand-checked points") {
    // a0 = gamma(1+gamma)/y, a1 = ((2 gamma + 1) y - (1+gamma))/y
    CHECK(coeff_a0(0.5, 0.5) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(coeff_a0(0.5, 0.25) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(coeff_a1(0.5, 0.5) == doctest::Approx(-1.0).epsilon(1e-15));
    // a1 vanishes at y = (1+gamma)/(2 gamma + 1)
    CHECK(coeff_a1(0.5, 0.75) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(coeff_a1(0.25, (1.25) / 1.5) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("rhs worked example") {
    // gamma=0.5, sigma_D=0.2, A=2, xi=0.06 at (y,h,I) = (0.5, 0.5, 0):
    // a2 = 0.06/0.04 - 2 = -0.5, dh = 1.5 - 1.0 - 0.25 = 0.25, dI = -1.
    const ModelParams p(0.5, 0.2, 2.0, 0.06);
    const Deriv d = rhs(p, {0.5, 0.5, 0.0});
    CHECK(d.dh == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.dI == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("startup series slope") {
    // s1 = gamma^2 (1 + a2(0)) / (2 + gamma); a2(0) = xi/sigma_D^2 - A.
    CHECK(series_slope(0.5, -0.5) == doctest::Approx(0.05).epsilon(1e-14));
    // a2(0) < -1 flips the sign: subcritical starts can dip below gamma.
    CHECK(series_slope(0.5, -2.0) < 0.0);
    const ModelParams p(0.5, 0.2, 2.0, 0.06);
    const AugmentedState s = series_start(p, 1e-6);
    CHECK(s.y == doctest::Approx(1e-6));
    CHECK(s.h == doctest::Approx(0.5 + 0.05 * 1e-6).epsilon(1e-12));
    CHECK(s.I == doctest::Approx(-0.5 * 1e-6).epsilon(1e-6));
}

TEST_CASE("Picard fixed point agrees with the integrator near zero") {
    const ModelParams p(0.5, 0.2, 2.0, 0.06);
    const IntegratorConfig cfg;
    const PicardReport rep = picard_local(p, 1e-3);
    CHECK(rep.contracting);
    CHECK(rep.sup_distances.back() < 1e-12);

    const TrajectoryOutcome o = integrate(p, cfg);
    double max_diff = 0.0;
    for (const auto& pt : rep.grid.points()) {
        if (pt.y < cfg.start_offset) continue;  // below the series stitch
        max_diff = std::max(max_diff, std::abs(pt.h - o.grid.eval_h(pt.y)));
    }
    CHECK(max_diff < 10.0 * cfg.rel_tol);
}

TEST_CASE("refinement convergence is order-consistent") {
    // Halving (rel_tol, abs_tol, delta, eps) twice: the second change in h at
    // fixed interior nodes must not exceed 4x the first one.  The ladder
    // starts well above the default tolerances; at the defaults the changes
    // sit at the accept/reject noise floor (~1e-10), where consecutive
    // differences are not ordered.
    const ModelParams p(0.5, 0.2, 2.0, 0.03);
    IntegratorConfig c0;
    c0.rel_tol = c0.abs_tol = 1e-6;
    c0.start_offset = 1e-5;
    c0.end_offset = 1e-7;
    IntegratorConfig c1 = c0, c2 = c0;
    c1.rel_tol /= 2; c1.abs_tol /= 2; c1.start_offset /= 2; c1.end_offset /= 2;
    c2.rel_tol /= 4; c2.abs_tol /= 4; c2.start_offset /= 4; c2.end_offset /= 4;
    const TrajectoryOutcome o0 = integrate(p, c0);
    const TrajectoryOutcome o1 = integrate(p, c1);
    const TrajectoryOutcome o2 = integrate(p, c2);
    REQUIRE(o0.completed());
    REQUIRE(o1.completed());
    REQUIRE(o2.completed());
    double d1 = 0.0, d2 = 0.0;
    for (double y = 0.1; y < 0.95; y += 0.1) {
        d1 = std::max(d1, std::abs(o1.grid.eval_h(y) - o0.grid.eval_h(y)));
        d2 = std::max(d2, std::abs(o2.grid.eval_h(y) - o1.grid.eval_h(y)));
    }
    CHECK(d1 > 1e-13);              // above the noise floor: the ratio means something
    CHECK(d1 < 1e-5);
    CHECK(d2 < 4.0 * d1);           // and the changes do not grow
}

TEST_CASE("Lipschitz dependence on xi") {
    // |h_a(y) - h_b(y)| <= C y |a - b| with an empirical C that is finite and
    // stable under tolerance refinement.
    const double xi_a = 0.05, xi_b = 0.051;
    const auto measure_C = [&](const IntegratorConfig& cfg) {
        const TrajectoryOutcome a = integrate(ModelParams(0.5, 0.2, 2.0, xi_a), cfg);
        const TrajectoryOutcome b = integrate(ModelParams(0.5, 0.2, 2.0, xi_b), cfg);
        REQUIRE(a.completed());
        REQUIRE(b.completed());
        double C = 0.0;
        for (double y = 0.05; y <= 0.9; y += 0.05)
            C = std::max(C, std::abs(a.grid.eval_h(y) - b.grid.eval_h(y)) / (y * (xi_b - xi_a)));
        return C;
    };
    IntegratorConfig fine;
    fine.rel_tol /= 2;
    fine.abs_tol /= 2;
    const double C_coarse = measure_C(IntegratorConfig{});
    const double C_fine = measure_C(fine);
    CHECK(C_coarse > 0.0);
    CHECK(C_coarse < 100.0);
    CHECK(std::abs(C_fine - C_coarse) <= 1e-3 * C_coarse);
}

TEST_CASE("subcritical trajectory completes inside the band") {
    const ModelParams p(0.5, 0.2, 2.0, 0.03);
    const TrajectoryOutcome o = integrate(p, IntegratorConfig{});
    REQUIRE(o.completed());
    CHECK(o.grid.min_h() > 0.0);
    CHECK(o.grid.max_h() < 1.0);
    // terminal value approaches gamma/A = 0.25 from above
    CHECK(o.grid.points().back().h == doctest::Approx(0.25).epsilon(1e-3));
    // I is decreasing (h < 1 throughout)
    const auto& pts = o.grid.points();
    for (std::size_t i = 1; i < pts.size(); i += pts.size() / 37)
        CHECK(pts[i].I < pts[i - 1].I);
}

TEST_CASE("supercritical trajectory stops early") {
    const ModelParams p(0.5, 0.2, 2.0, 10.0);
    const TrajectoryOutcome o = integrate(p, IntegratorConfig{});
    CHECK(o.status == TrajectoryStatus::HitOne);
    CHECK(o.y_stop == doctest::Approx(0.00817545).epsilon(1e-4));
    CHECK(o.y_stop < 1.0);
}

TEST_CASE("pointwise ordering in xi on a shared grid") {
    const IntegratorConfig cfg;
    const TrajectoryOutcome lo = integrate(ModelParams(0.5, 0.2, 2.0, 0.05), cfg);
    const TrajectoryOutcome hi = integrate(ModelParams(0.5, 0.2, 2.0, 0.08), cfg);
    REQUIRE(lo.completed());
    REQUIRE(hi.completed());
    for (double y = 0.01; y < 0.99; y += 0.005)
        CHECK(hi.grid.eval_h(y) > lo.grid.eval_h(y));
}

TEST_CASE("grid interpolation matches nodes and extends below the first one") {
    const ModelParams p(0.5, 0.2, 2.0, 0.06);
    const TrajectoryOutcome o = integrate(p, IntegratorConfig{});
    const auto& pts = o.grid.points();
    const auto& mid = pts[pts.size() / 2];
    CHECK(o.grid.eval_h(mid.y) == doctest::Approx(mid.h).epsilon(1e-14));
    CHECK(o.grid.eval_I(mid.y) == doctest::Approx(mid.I).epsilon(1e-12));
    // below the first node: the startup series, not an extrapolated cubic
    const double y_tiny = pts.front().y / 4;
    CHECK(o.grid.eval_h(y_tiny) ==
          doctest::Approx(0.5 + o.grid.series_slope() * y_tiny).epsilon(1e-12));
    CHECK(o.grid.eval_exp_I(y_tiny) == doctest::Approx(std::exp(-0.5 * y_tiny)).epsilon(1e-9));
}

TEST_CASE("parameter and integrator validation") {
    CHECK_THROWS_AS(ModelParams(0.0, 0.2, 2.0, 0.06), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1.0, 0.2, 2.0, 0.06), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(0.5, -0.2, 2.0, 0.06), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(0.5, 0.2, 1.0, 0.06), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(0.5, 0.2, 2.0, 0.0), std::invalid_argument);
    IntegratorConfig bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = IntegratorConfig{};
    bad.start_offset = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
