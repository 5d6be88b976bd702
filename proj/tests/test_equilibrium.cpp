#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "lsmp/equilibrium.hpp"

using namespace lsmp;

namespace {
// One critical solve shared across the binary; everything downstream is a
// closed form on top of it.
const CriticalSolution& crit() {
    static const CriticalSolution sol = find_critical(0.5, 0.2, 2.0, 1e-12, IntegratorConfig{});
    return sol;
}
const EconomyParams& econ() {
    static const EconomyParams e(0.025, 0.02, 0.2, 0.5, 1.0);
    return e;
}
}  // namespace

TEST_CASE("A from economy parameters") {
    CHECK(compute_A(econ()) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(compute_A(EconomyParams(0.1, 0.05, 0.2, 0.5, 1.0)) ==
          doctest::Approx(5.0).epsilon(1e-14));
    // the A=1 boundary sits at beta = (1-gamma)(2 mu_D - gamma sigma_D^2)/2
    // = 0.005; anything at or below it is rejected (0.005 itself straddles
    // the threshold by rounding, so probe just below)
    CHECK_THROWS_AS(EconomyParams(0.00499, 0.02, 0.2, 0.5, 1.0), std::invalid_argument);
    CHECK_NOTHROW(EconomyParams(0.00501, 0.02, 0.2, 0.5, 1.0));
    CHECK_THROWS_AS(EconomyParams(0.025, 0.02, 0.2, 1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(EconomyParams(0.025, 0.02, -0.2, 0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(EconomyParams(0.025, 0.02, 0.2, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("g: values, endpoints, monotonicity") {
    CHECK(g_value(crit(), 0.0) == doctest::Approx(2.0 / crit().xi0).epsilon(1e-13));
    CHECK(g_value(crit(), 0.0) == doctest::Approx(16.3507317063).epsilon(1e-9));
    CHECK(g_value(crit(), 0.5) == doctest::Approx(15.5309396443).epsilon(1e-9));
    CHECK(g_value(crit(), 1.0) == 0.0);

    double prev = g_value(crit(), 0.0);
    for (double y = 0.01; y < 1.0; y += 0.01) {
        const double cur = g_value(crit(), y);
        CHECK(cur < prev);
        prev = cur;
    }

    // flat entry: one-sided difference quotients at 0 shrink with dy
    const double g0 = g_value(crit(), 0.0);
    double prev_quot = 1e300;
    for (double dy : {1e-3, 1e-4, 1e-5}) {
        const double quot = std::abs(g_value(crit(), dy) - g0) / dy;
        CHECK(quot < prev_quot);
        prev_quot = quot;
    }
}

TEST_CASE("g: identity chain and analytic derivatives") {
    for (double y : {0.1, 0.5, 0.9}) {
        // g(y) (1-y)^gamma xi0/2 = e^{-I(y)} (1-y), exactly by construction
        const double lhs = g_value(crit(), y) * std::pow(1.0 - y, 0.5) * crit().xi0 / 2.0;
        const double rhs = (1.0 - y) / crit().grid.eval_exp_I(y);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));

        // d/dy [e^{-I}(1-y)] = -h e^{-I}, via central differences
        const double dy = 1e-6;
        const double up = (1.0 - (y + dy)) / crit().grid.eval_exp_I(y + dy);
        const double dn = (1.0 - (y - dy)) / crit().grid.eval_exp_I(y - dy);
        const double fd = (up - dn) / (2.0 * dy);
        const double an = -crit().grid.eval_h(y) / crit().grid.eval_exp_I(y);
        CHECK(fd == doctest::Approx(an).epsilon(1e-5));

        // g' and g'' agree with difference quotients of g and g'.  The
        // residual floor (~5e-7 relative, dy-independent) is the cubic
        // interpolation error between accepted nodes, so the tolerances
        // certify formula consistency rather than quadrature accuracy.
        const double gp_fd = (g_value(crit(), y + dy) - g_value(crit(), y - dy)) / (2.0 * dy);
        CHECK(g_prime(crit(), y) == doctest::Approx(gp_fd).epsilon(1e-5));
        const double gs_fd = (g_prime(crit(), y + dy) - g_prime(crit(), y - dy)) / (2.0 * dy);
        CHECK(g_second(crit(), y) == doctest::Approx(gs_fd).epsilon(1e-4));
    }
}

TEST_CASE("naive g evaluation fails near the right edge") {
    // mid-domain the literal quadrature form agrees...
    const double mid_rel =
        std::abs(g_value_naive(crit(), 0.5) - g_value(crit(), 0.5)) / g_value(crit(), 0.5);
    CHECK(mid_rel < 1e-9);
    // ...but near y=1 it pits an overflowing exponential against a vanishing
    // power and loses all accuracy, which is why the stable form is the API
    const double y = 1.0 - 1e-6;
    const double edge_rel = std::abs(g_value_naive(crit(), y) - g_value(crit(), y)) / g_value(crit(), y);
    CHECK(edge_rel > 1.0);
}

TEST_CASE("g solves its pricing ODE to solver accuracy") {
    double worst = 0.0;
    for (int i = 1; i <= 20; ++i)
        worst = std::max(worst, std::abs(g_ode_residual(crit(), econ(), i / 21.0)));
    CHECK(worst < 1e-10);
    CHECK(std::abs(g_ode_residual(crit(), econ(), 1e-3)) < 1e-10);
    CHECK(std::abs(g_ode_residual(crit(), econ(), 1.0 - 1e-3)) < 1e-10);
    CHECK_THROWS_AS(g_ode_residual(crit(), econ(), 1e-4), std::domain_error);
    CHECK_THROWS_AS(g_ode_residual(crit(), econ(), 1.0 - 1e-4), std::domain_error);
}

TEST_CASE("state-process coefficients") {
    const DriftVol dv = drift_vol(crit(), 0.5);
    CHECK(dv.mu_Y == doctest::Approx(0.0153904217501).epsilon(1e-8));
    CHECK(dv.sigma_Y == doctest::Approx(0.153904217501).epsilon(1e-8));
    // sigma_Y(y) = sigma_D (1-y)/h(y) directly against the grid
    CHECK(dv.sigma_Y ==
          doctest::Approx(0.2 * 0.5 / crit().grid.eval_h(0.5)).epsilon(1e-12));

    for (double y = 0.05; y < 1.0; y += 0.05) CHECK(drift_vol(crit(), y).sigma_Y > 0.0);
    const DriftVol at_one = drift_vol(crit(), 1.0);
    CHECK(at_one.mu_Y == doctest::Approx(0.0));
    CHECK(at_one.sigma_Y == doctest::Approx(0.0));
    CHECK_THROWS_AS(drift_vol(crit(), 0.0), std::domain_error);

    // scaled drift/vol^2 ratios approach (1+gamma)/2 at 0 and -(1-gamma)/2 at 1
    const DriftVol lo = drift_vol(crit(), 1e-4);
    CHECK(lo.mu_Y * 1e-4 / (lo.sigma_Y * lo.sigma_Y) == doctest::Approx(0.75).epsilon(1e-2));
    const DriftVol hi = drift_vol(crit(), 1.0 - 1e-4);
    CHECK(hi.mu_Y * 1e-4 / (hi.sigma_Y * hi.sigma_Y) == doctest::Approx(-0.25).epsilon(1e-2));
}

TEST_CASE("interest rate and market price of risk") {
    const RateMpr rm = rate_and_mpr(crit(), econ(), 0.5);
    CHECK(rm.r == doctest::Approx(-0.0155297622467).epsilon(1e-8));
    CHECK(rm.kappa == doctest::Approx(0.253904217501).epsilon(1e-8));

    // kappa stays above the full-participation level gamma sigma_D = 0.1
    double kmin = 1e300;
    for (int i = 1; i < 1000; ++i)
        kmin = std::min(kmin, rate_and_mpr(crit(), econ(), i / 1000.0).kappa);
    CHECK(kmin > 0.1);
    CHECK(kmin == doctest::Approx(0.100100178799).epsilon(1e-6));

    // r recovers from its -c/y dip: increasing through the left margin
    double prev = rate_and_mpr(crit(), econ(), 1e-4).r;
    for (double y = 2e-4; y <= 1e-3; y += 1e-4) {
        const double cur = rate_and_mpr(crit(), econ(), y).r;
        CHECK(cur > prev);
        prev = cur;
    }

    // the economy must match the critical solution's (gamma, sigma_D, A)
    CHECK_THROWS_AS(rate_and_mpr(crit(), EconomyParams(0.1, 0.05, 0.2, 0.5, 1.0), 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(rate_and_mpr(crit(), econ(), 0.0), std::domain_error);
    CHECK_THROWS_AS(rate_and_mpr(crit(), econ(), 1.0), std::domain_error);
}

TEST_CASE("initial-state calibration") {
    const double theta2 = g_value(crit(), 0.0) * 1.0 / 2.0;
    const double Y0 = solve_Y0(crit(), econ(), theta2);
    CHECK(Y0 == doctest::Approx(0.673069525432).epsilon(1e-9));
    // round trip through the defining relation g(Y0) D0 (1-Y0)^gamma = theta2
    CHECK(g_value(crit(), Y0) * std::pow(1.0 - Y0, 0.5) ==
          doctest::Approx(theta2).epsilon(1e-10));
    // endowment share sweeps Y0 monotonically
    CHECK(solve_Y0(crit(), econ(), theta2 * 1.5) < Y0);
    CHECK(solve_Y0(crit(), econ(), theta2 * 0.5) > Y0);
    CHECK_THROWS_AS(solve_Y0(crit(), econ(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_Y0(crit(), econ(), g_value(crit(), 0.0) * 1.0), std::invalid_argument);
}

TEST_CASE("boundary classification diagnostics") {
    const BoundaryReport rep = boundary_diagnostics(crit());
    CHECK(rep.anchor == 0.5);

    // left edge: s(2^-k) -> -infinity (entrance boundary)
    REQUIRE(rep.k_left.size() == rep.s_left.size());
    CHECK(rep.k_left.front() == 4);
    CHECK(rep.k_left.back() == 20);
    CHECK(rep.left_divergence);
    for (std::size_t i = 0; i < rep.s_left.size(); ++i) CHECK(rep.s_left[i] < 0.0);
    for (std::size_t i = 1; i < rep.s_left.size(); ++i)
        CHECK(std::abs(rep.s_left[i]) > std::abs(rep.s_left[i - 1]));

    // right edge: s(1-eps) converges with an eps^gamma tail
    REQUIRE(rep.eps_right.size() == 7);
    REQUIRE(rep.s_right.size() == 7);
    for (std::size_t i = 1; i < rep.s_right.size(); ++i) CHECK(rep.s_right[i] > rep.s_right[i - 1]);
    CHECK(rep.s_one == doctest::Approx(0.635350654946).epsilon(1e-7));
    CHECK(rep.s_one_cauchy_rel < 1e-6);
    CHECK(rep.fitted_tail_rate == doctest::Approx(0.5).epsilon(0.1));
    // the raw ladder is still visibly moving at the finest pair; only the
    // extrapolant is settled
    CHECK(rep.raw_pair_rel_change > 1e-3);
    CHECK(rep.raw_pair_rel_change < 1e-2);

    // speed-measure ratio blows up like c/(1-y): its (1-y)-scaled form stays
    // bounded away from zero
    CHECK(rep.speed_ratio_min > 10.0);
    CHECK(rep.speed_ratio_min == doctest::Approx(48.9308).epsilon(1e-3));

    // rho(y)(1-y)^{1-gamma} is pinched near 1
    CHECK(rep.rho_weight_min > 0.37);
    CHECK(rep.rho_weight_max < 0.39);
    CHECK(rep.rho_weight_min <= rep.rho_weight_max);

    // panel-refinement stability of the underlying quadrature
    CHECK(rep.quad_refine_max_rel < 1e-9);
}

TEST_CASE("equilibrium table artifact") {
    const std::string path = "test_equilibrium_table.csv";
    write_equilibrium_csv(crit(), econ(), path, 50);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "y,h,mu_Y,sigma_Y,r,kappa,g");
    std::size_t rows = 0;
    double first_y = 0.0, prev_g = 1e300;
    for (std::string line; std::getline(in, line); ++rows) {
        double y, h, mu, sg, r, kp, g;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &y, &h, &mu, &sg, &r, &kp,
                            &g) == 7);
        if (rows == 0) first_y = y;
        CHECK(g < prev_g);  // g decreases along the table
        prev_g = g;
    }
    CHECK(rows == 49);
    CHECK(first_y == doctest::Approx(0.02).epsilon(1e-12));
    std::remove(path.c_str());
    CHECK_THROWS_AS(write_equilibrium_csv(crit(), econ(), path, 1), std::invalid_argument);
}
