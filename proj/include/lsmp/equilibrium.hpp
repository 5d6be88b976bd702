#pragma once

// Equilibrium layer: maps economy-level parameters (beta, mu_D, sigma_D,
// gamma, D0) to the ODE constant A, and evaluates the closed forms built on
// the critical solution h: the state-process coefficients mu_Y and sigma_Y,
// the interest rate r, the market price of risk kappa, and the value-function
// weight g.  Also calibrates the initial state Y0 from the restricted
// investor's endowment and produces the boundary-classification diagnostics
// (scale function / speed measure) for the state process.

#include <string>
#include <vector>

#include "lsmp/shooting.hpp"

namespace lsmp {

struct EconomyParams {
    double beta;     // time-preference rate
    double mu_D;     // dividend drift
    double sigma_D;  // dividend volatility
    double gamma;    // risk aversion, in (0,1)
    double D0;       // initial dividend

    EconomyParams(double beta_, double mu_D_, double sigma_D_, double gamma_, double D0_);
};

// A = (2 beta + sigma_D^2 - (1-gamma)(2 mu_D - gamma sigma_D^2)) / sigma_D^2.
// The EconomyParams invariant beta > (1-gamma)(2 mu_D - gamma sigma_D^2)/2 is
// exactly A > 1; compute_A re-checks and throws on A <= 1.
double compute_A(const EconomyParams& econ);

struct DriftVol {
    double mu_Y;
    double sigma_Y;
};

// mu_Y(y) = sigma_D^2 (1-y)(1+gamma + 2 gamma y h - 2y(1+gamma)) / (2 y h^2),
// sigma_Y(y) = sigma_D (1-y)/h(y).  Defined for y in (0,1]; both vanish at
// y=1.  mu_Y is singular at y=0 (domain error).
DriftVol drift_vol(const CriticalSolution& crit, double y);

struct RateMpr {
    double r;
    double kappa;
};

// r(y) = beta + gamma mu_D - gamma(gamma+1) sigma_D^2 / 2
//        - gamma(gamma+1) sigma_D^2 (1-y) / (2 y h(y)^2),
// kappa(y) = gamma sigma_D ((1-y)/(y h(y)) + 1); both only on the open
// interval (domain error at y in {0,1}).  The economy must be consistent
// with the critical solution's (gamma, sigma_D, A).
RateMpr rate_and_mpr(const CriticalSolution& crit, const EconomyParams& econ, double y);

// g(y) = (2/xi0) e^{-I(y)} (1-y)^{1-gamma} on [0,1].  This is the stable
// rewriting of the defining formula (2/xi0) exp(-int_0^y h/(1-q) dq)
// (1-y)^{-gamma}: the integral in the exponent diverges as y -> 1 while
// I(y) = int_0^y (h-1)/(1-q) dq stays finite, so the literal form pits an
// overflowing exponential against a vanishing power.  g(0) = 2/xi0,
// g(1) = 0, and g is non-increasing.
double g_value(const CriticalSolution& crit, double y);

// g' = g (gamma - h)/(1-y); differentiating once more through the h-ODE,
// g'' = g [ (gamma-h)^2 + (gamma-h) - h'(1-y) ] / (1-y)^2 with h' taken from
// the ODE right-hand side (not from differencing the grid).
double g_prime(const CriticalSolution& crit, double y);
double g_second(const CriticalSolution& crit, double y);

// Literal evaluation of the defining formula with fixed-panel quadrature of
// h/(1-q) and no singularity handling; kept as the comparison target showing
// why the stable form is mandatory near y=1.  Requires y < 1.
double g_value_naive(const CriticalSolution& crit, double y);

// Residual of beta g = (1-gamma) mu_D g - (1-gamma) gamma sigma_D^2 g / 2
//   + mu_Y g' + sigma_Y^2 g''/2 + (1-gamma) sigma_D sigma_Y g' + (1-y)^{1-gamma}
// with all derivatives analytic.  Valid on the interior margins
// [1e-3, 1 - 1e-3] (domain error outside); vanishes to solver accuracy.
double g_ode_residual(const CriticalSolution& crit, const EconomyParams& econ, double y);

// Invert g(Y0) D0 (1-Y0)^gamma = theta2, i.e. (2/xi0) e^{-I} (1-y) D0 =
// theta2, a strictly decreasing map from g(0) D0 at y=0 to 0 at y=1.
// Requires 0 < theta2 < g(0) D0; bisects to 1e-12.
double solve_Y0(const CriticalSolution& crit, const EconomyParams& econ, double theta2);

// Boundary-classification diagnostics for the state process.  With anchor
// a in (0,1), the scale density has the closed form
//   rho(y) = (a/y)^{1+gamma} ((1-a)/(1-y))^{1-gamma} e^{2 gamma (I(a)-I(y))}
// and s(y) = int_a^y rho.  Near 0, s diverges to -infinity (y=0 is
// inaccessible entrance); near 1, s converges (y=1 is inaccessible natural
// attracting) with an eps^gamma tail, and the speed-measure ratio
// (s(1)-s(y))/(rho sigma_Y^2) grows like c/(1-y).
struct BoundaryReport {
    double anchor;
    std::vector<int> k_left;          // dyadic exponents, 4..20
    std::vector<double> s_left;       // s(2^-k), negative, |s| increasing
    bool left_divergence;             // strict increase of |s(2^-k)| in k

    std::vector<double> eps_right;    // 1e-2 .. 1e-8
    std::vector<double> s_right;      // s(1 - eps)
    double s_one;                     // two-point Richardson in eps^gamma, finest pair
    double s_one_alt;                 // same from the previous pair
    double s_one_cauchy_rel;          // |s_one - s_one_alt| / |s_one|
    double fitted_tail_rate;          // decay rate of s(1)-s(1-eps); theory: gamma
    double raw_pair_rel_change;       // relative change across the finest raw pair, reported

    double speed_ratio_min;           // min over the eps ladder of (1-y)(s_one - s)/(rho sigma_Y^2)
    double rho_weight_min;            // bounds of rho(y) (1-y)^{1-gamma} near 1
    double rho_weight_max;
    double quad_refine_max_rel;       // panel-refinement stability of the s quadrature
};

BoundaryReport boundary_diagnostics(const CriticalSolution& crit, double anchor = 0.5);

// Tabulate `y,h,mu_Y,sigma_Y,r,kappa,g` on the interior uniform grid
// y = i/n, i = 1..n-1.
void write_equilibrium_csv(const CriticalSolution& crit, const EconomyParams& econ,
                           const std::string& path, int n);

}  // namespace lsmp
