#include "lsmp/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "lsmp/extrap.hpp"
#include "lsmp/quad.hpp"

namespace lsmp {

namespace {

// Every closed form below reads h (and I) off the critical grid; the economy
// must describe the same model, otherwise r/kappa/g silently mix parameter
// sets.  Matching A ties beta and mu_D to the ODE actually solved.
const ModelParams& checked_params(const CriticalSolution& crit) {
    if (!crit.grid.params())
        throw std::invalid_argument("equilibrium: critical grid carries no model parameters");
    return *crit.grid.params();
}

void check_economy(const CriticalSolution& crit, const EconomyParams& econ) {
    const ModelParams& p = checked_params(crit);
    const double A = compute_A(econ);
    if (std::abs(econ.gamma - p.gamma) > 1e-12 || std::abs(econ.sigma_D - p.sigma_D) > 1e-12 ||
        std::abs(A - p.A) > 1e-12 * std::max(1.0, std::abs(p.A)))
        throw std::invalid_argument("equilibrium: economy inconsistent with the critical solution");
}

double require_interior(double y, const char* who) {
    if (!(y > 0.0 && y < 1.0)) throw std::domain_error(std::string(who) + ": y must lie in (0,1)");
    return y;
}

}  // namespace

EconomyParams::EconomyParams(double beta_, double mu_D_, double sigma_D_, double gamma_, double D0_)
    : beta(beta_), mu_D(mu_D_), sigma_D(sigma_D_), gamma(gamma_), D0(D0_) {
    if (!(beta > 0.0)) throw std::invalid_argument("EconomyParams: beta must be positive");
    if (!(sigma_D > 0.0)) throw std::invalid_argument("EconomyParams: sigma_D must be positive");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("EconomyParams: gamma must lie in (0,1)");
    if (!(D0 > 0.0)) throw std::invalid_argument("EconomyParams: D0 must be positive");
    if (!(beta > 0.5 * (1.0 - gamma) * (2.0 * mu_D - gamma * sigma_D * sigma_D)))
        throw std::invalid_argument(
            "EconomyParams: need beta > (1-gamma)(2 mu_D - gamma sigma_D^2)/2");
}

double compute_A(const EconomyParams& econ) {
    const double sd2 = econ.sigma_D * econ.sigma_D;
    const double A =
        (2.0 * econ.beta + sd2 - (1.0 - econ.gamma) * (2.0 * econ.mu_D - econ.gamma * sd2)) / sd2;
    if (!(A > 1.0)) throw std::invalid_argument("compute_A: parameters give A <= 1");
    return A;
}

DriftVol drift_vol(const CriticalSolution& crit, double y) {
    const ModelParams& p = checked_params(crit);
    if (!(y > 0.0 && y <= 1.0)) throw std::domain_error("drift_vol: y must lie in (0,1]");
    if (y == 1.0) return {0.0, 0.0};
    const double h = crit.grid.eval_h(y);
    const double sd2 = p.sigma_D * p.sigma_D;
    const double mu =
        sd2 * (1.0 - y) * (1.0 + p.gamma + 2.0 * p.gamma * y * h - 2.0 * y * (1.0 + p.gamma)) /
        (2.0 * y * h * h);
    return {mu, p.sigma_D * (1.0 - y) / h};
}

RateMpr rate_and_mpr(const CriticalSolution& crit, const EconomyParams& econ, double y) {
    check_economy(crit, econ);
    require_interior(y, "rate_and_mpr");
    const double g = econ.gamma, sd = econ.sigma_D;
    const double h = crit.grid.eval_h(y);
    const double r = econ.beta + g * econ.mu_D - 0.5 * g * (g + 1.0) * sd * sd -
                     g * (g + 1.0) * sd * sd * (1.0 - y) / (2.0 * y * h * h);
    const double kappa = g * sd * ((1.0 - y) / (y * h) + 1.0);
    return {r, kappa};
}

double g_value(const CriticalSolution& crit, double y) {
    const ModelParams& p = checked_params(crit);
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("g_value: y must lie in [0,1]");
    if (y == 1.0) return 0.0;
    return (2.0 / crit.xi0) * std::exp(-crit.grid.eval_I(y)) * std::pow(1.0 - y, 1.0 - p.gamma);
}

double g_prime(const CriticalSolution& crit, double y) {
    const ModelParams& p = checked_params(crit);
    require_interior(y, "g_prime");
    return g_value(crit, y) * (p.gamma - crit.grid.eval_h(y)) / (1.0 - y);
}

double g_second(const CriticalSolution& crit, double y) {
    const ModelParams& p = checked_params(crit);
    require_interior(y, "g_second");
    const AugmentedState s{y, crit.grid.eval_h(y), crit.grid.eval_I(y)};
    const double hp = rhs(p, s).dh;  // analytic h', avoids differencing the grid
    const double d = p.gamma - s.h;
    return g_value(crit, y) * (d * d + d - hp * (1.0 - y)) / ((1.0 - y) * (1.0 - y));
}

double g_value_naive(const CriticalSolution& crit, double y) {
    const ModelParams& p = checked_params(crit);
    if (!(y >= 0.0 && y < 1.0)) throw std::domain_error("g_value_naive: y must lie in [0,1)");
    // Literal formula: exponent integrand h/(1-q) blows up at the right edge,
    // and the result is then multiplied back up by (1-y)^{-gamma}.
    const auto integrand = [&](double q) { return crit.grid.eval_h(q) / (1.0 - q); };
    const double Q = gauss_panels(integrand, 0.0, y, 64);
    return (2.0 / crit.xi0) * std::exp(-Q) * std::pow(1.0 - y, -p.gamma);
}

double g_ode_residual(const CriticalSolution& crit, const EconomyParams& econ, double y) {
    check_economy(crit, econ);
    if (!(y >= 1e-3 && y <= 1.0 - 1e-3))
        throw std::domain_error("g_ode_residual: y outside the interior margins [1e-3, 1-1e-3]");
    const double g = g_value(crit, y);
    const double gp = g_prime(crit, y);
    const double gpp = g_second(crit, y);
    const DriftVol dv = drift_vol(crit, y);
    const double ga = econ.gamma, sd = econ.sigma_D;
    const double rhs_val = (1.0 - ga) * econ.mu_D * g - 0.5 * (1.0 - ga) * ga * sd * sd * g +
                           dv.mu_Y * gp + 0.5 * dv.sigma_Y * dv.sigma_Y * gpp +
                           (1.0 - ga) * sd * dv.sigma_Y * gp + std::pow(1.0 - y, 1.0 - ga);
    return econ.beta * g - rhs_val;
}

double solve_Y0(const CriticalSolution& crit, const EconomyParams& econ, double theta2) {
    check_economy(crit, econ);
    const auto endowment = [&](double y) { return g_value(crit, y) * econ.D0 * std::pow(1.0 - y, econ.gamma); };
    const double top = endowment(0.0);  // = g(0) D0
    if (!(theta2 > 0.0 && theta2 < top))
        throw std::invalid_argument("solve_Y0: theta2 must lie in (0, g(0)*D0)");
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (endowment(mid) > theta2 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// rho(y) = (a/y)^{1+gamma} ((1-a)/(1-y))^{1-gamma} e^{2 gamma (I(a)-I(y))},
// assembled in log space; valid on both sides of the anchor.
struct ScaleDensity {
    const SolutionGrid& grid;
    double gamma, a, Ia;

    ScaleDensity(const CriticalSolution& crit, double anchor)
        : grid(crit.grid),
          gamma(checked_params(crit).gamma),
          a(anchor),
          Ia(crit.grid.eval_I(anchor)) {}

    double operator()(double y) const {
        return std::exp((1.0 + gamma) * (std::log(a) - std::log(y)) +
                        (1.0 - gamma) * (std::log1p(-a) - std::log1p(-y)) +
                        2.0 * gamma * (Ia - grid.eval_I(y)));
    }
};

// Integrate rho over [lo, hi] inside (0,1), splitting so that each panel at
// most doubles/halves the distance to the nearer singular endpoint.  Also
// reports the relative change under panel refinement for the stability check.
template <typename F>
double graded_integral(const F& f, double lo, double hi, double* refine_rel) {
    double coarse = 0.0, fine = 0.0;
    double x = lo;
    while (x < hi) {
        const double step = std::min(x, 0.5 * (1.0 - x));
        const double next = std::min(hi, x + std::max(step, (hi - lo) * 1e-3));
        coarse += gauss_panels(f, x, next, 2);
        fine += gauss_panels(f, x, next, 4);
        x = next;
    }
    if (refine_rel) {
        const double scale = std::max(1.0, std::abs(fine));
        *refine_rel = std::max(*refine_rel, std::abs(fine - coarse) / scale);
    }
    return fine;
}

}  // namespace

BoundaryReport boundary_diagnostics(const CriticalSolution& crit, double anchor) {
    require_interior(anchor, "boundary_diagnostics");
    const ScaleDensity rho(crit, anchor);
    const ModelParams& p = checked_params(crit);

    BoundaryReport rep;
    rep.anchor = anchor;
    rep.quad_refine_max_rel = 0.0;

    // Left side: s(2^-k) = -int_{2^-k}^{a} rho, accumulated octave by octave
    // so each s value reuses the previous integrals.
    double acc = graded_integral(rho, std::pow(2.0, -4), anchor, &rep.quad_refine_max_rel);
    for (int k = 4; k <= 20; ++k) {
        rep.k_left.push_back(k);
        rep.s_left.push_back(-acc);
        acc += graded_integral(rho, std::pow(2.0, -(k + 1)), std::pow(2.0, -k),
                               &rep.quad_refine_max_rel);
    }
    rep.left_divergence = true;
    for (std::size_t i = 1; i < rep.s_left.size(); ++i)
        if (!(std::abs(rep.s_left[i]) > std::abs(rep.s_left[i - 1]))) rep.left_divergence = false;

    // Right side: s(1-eps) = int_a^{1-eps} rho, again accumulated.
    rep.eps_right = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    double racc = graded_integral(rho, anchor, 1.0 - rep.eps_right.front(),
                                  &rep.quad_refine_max_rel);
    for (std::size_t i = 0; i < rep.eps_right.size(); ++i) {
        rep.s_right.push_back(racc);
        if (i + 1 < rep.eps_right.size())
            racc += graded_integral(rho, 1.0 - rep.eps_right[i], 1.0 - rep.eps_right[i + 1],
                                    &rep.quad_refine_max_rel);
    }

    // s(1) - s(1-eps) = int over the tail of (1-y)^{gamma-1} times an
    // analytic factor, so it is K eps^gamma (1 + O(eps)).  A two-point
    // Richardson step in eps^gamma alone removes the leading term and leaves
    // an O(eps^{1+gamma}) residual (~1e-8 at eps = 1e-5); fitting further
    // exponents is counterproductive because their columns are ~1e-11 of the
    // leading one at these eps and the fit turns into noise amplification.
    // Two extrapolations from consecutive pairs make the Cauchy certificate.
    const std::vector<double> expo{p.gamma};
    const std::size_t n_right = rep.eps_right.size();
    rep.s_one = power_law_limit({rep.eps_right[n_right - 2], rep.eps_right[n_right - 1]},
                                {rep.s_right[n_right - 2], rep.s_right[n_right - 1]}, expo);
    rep.s_one_alt = power_law_limit({rep.eps_right[n_right - 3], rep.eps_right[n_right - 2]},
                                    {rep.s_right[n_right - 3], rep.s_right[n_right - 2]}, expo);
    rep.s_one_cauchy_rel = std::abs(rep.s_one - rep.s_one_alt) / std::abs(rep.s_one);
    rep.fitted_tail_rate = fitted_difference_rate(rep.eps_right, rep.s_right);
    rep.raw_pair_rel_change = std::abs(rep.s_right[4] - rep.s_right[3]) / std::abs(rep.s_right[3]);

    rep.speed_ratio_min = std::numeric_limits<double>::infinity();
    rep.rho_weight_min = std::numeric_limits<double>::infinity();
    rep.rho_weight_max = 0.0;
    for (std::size_t i = 0; i < rep.eps_right.size(); ++i) {
        const double y = 1.0 - rep.eps_right[i];
        const double sigma = p.sigma_D * (1.0 - y) / crit.grid.eval_h(y);
        const double ratio =
            (rep.s_one - rep.s_right[i]) / (rho(y) * sigma * sigma) * (1.0 - y);
        rep.speed_ratio_min = std::min(rep.speed_ratio_min, ratio);
        const double w = rho(y) * std::pow(1.0 - y, 1.0 - p.gamma);
        rep.rho_weight_min = std::min(rep.rho_weight_min, w);
        rep.rho_weight_max = std::max(rep.rho_weight_max, w);
    }
    return rep;
}

void write_equilibrium_csv(const CriticalSolution& crit, const EconomyParams& econ,
                           const std::string& path, int n) {
    check_economy(crit, econ);
    if (n < 2) throw std::invalid_argument("write_equilibrium_csv: need n >= 2");
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("write_equilibrium_csv: cannot open " + path);
    std::fprintf(fp, "y,h,mu_Y,sigma_Y,r,kappa,g\n");
    for (int i = 1; i < n; ++i) {
        const double y = static_cast<double>(i) / n;
        const DriftVol dv = drift_vol(crit, y);
        const RateMpr rk = rate_and_mpr(crit, econ, y);
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", y, crit.grid.eval_h(y),
                     dv.mu_Y, dv.sigma_Y, rk.r, rk.kappa, g_value(crit, y));
    }
    std::fclose(fp);
}

}  // namespace lsmp
