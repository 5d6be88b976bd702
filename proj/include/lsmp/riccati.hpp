#pragma once

// Constant-coefficient Riccati family
//
//   f'(y) = a0(y) + a1(y) f/(1-y) + a3 f^2/(1-y),   f(0) = gamma,  a3 <= -gamma,
//
// whose endpoint f(1) = -gamma/a3 is known in closed form.  It shares the
// integration engine with the path-dependent problem and serves as ground
// truth for the integrator, the endpoint extrapolation, and the comparison
// machinery.

#include <string>
#include <vector>

#include "lsmp/grid.hpp"
#include "lsmp/ode.hpp"
#include "lsmp/types.hpp"

namespace lsmp {

struct ConstantRiccatiParams {
    double gamma;
    double a3;

    ConstantRiccatiParams(double gamma_, double a3_) : gamma(gamma_), a3(a3_) {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("ConstantRiccatiParams: gamma must lie in (0,1)");
        if (!(a3 <= -gamma))
            throw std::invalid_argument("ConstantRiccatiParams: need a3 <= -gamma");
    }
};

// Integrate the constant-a3 problem over (0, 1 - cfg.end_offset].  The h>=1
// stop is disabled: these solutions legitimately approach 1 from below (and
// reach it only at y=1, when a3 = -gamma).  Throws on integration failure.
SolutionGrid solve_constant_riccati(const ConstantRiccatiParams& p, const IntegratorConfig& cfg);

// Endpoint limit f(1) by power-law extrapolation of f(1-eps); the local
// analysis at y=1 gives correction exponents {gamma, 1, 1+gamma}.
double riccati_endpoint(const SolutionGrid& grid);

// Positive root f* of a0(y)(1-y) + a1(y) f + a3 f^2 = 0 in the numerically
// stable form 2 a0 (1-y) / (-a1 + sqrt(a1^2 - 4 a3 a0 (1-y))).  At interior
// stationary points of a solved grid, f equals f*.
double stationary_value(double gamma, double a3, double y);

// Right-edge diagnostics for the borderline member a3 = -gamma, whose slope
// diverges at y=1 while f itself and the tail integrals stay finite.
struct AppendixReport {
    std::vector<double> eps;            // sampling offsets, 1e-2 .. 1e-6
    std::vector<double> slope;          // f'(1-eps) from the ODE formula
    std::vector<double> tail_integral;  // int_0^{1-eps} (1-f)/(1-q) dq  (= -I(1-eps), exact)
    std::vector<double> total_variation;  // int over [delta, 1-eps] of |f'|
    double f_near_one;                  // f(1 - 1e-6)
    double fitted_tail_rate;            // p in 1-f(1-eps) ~ C eps^p; theory: p = gamma
    double fine_pair_change;            // tail integral change between eps=1e-7 and 1e-8
    bool slopes_increasing;             // strict divergence of f'(1-eps)
    bool f_near_one_ok;                 // |f(1-1e-6) - 1| <= 3e-3 (gap is ~C eps^gamma, C~2)
};

AppendixReport appendix_diagnostics(double gamma, const IntegratorConfig& cfg);

// Report row: `case,quantity,computed,expected,abs_err`.
struct ReportRow {
    std::string case_name;
    std::string quantity;
    double computed;
    double expected;
};

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);

}  // namespace lsmp
