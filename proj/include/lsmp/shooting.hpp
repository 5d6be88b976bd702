#pragma once

// Shooting layer: classify a trajectory at fixed xi as subcritical (reaches
// the right edge with h < 1) or supercritical (h hits 1 or blows up early),
// bracket the critical parameter xi0 = sup{xi : subcritical}, and bisect.
//
// Monotonicity of h in xi makes the classification a valid bisection
// predicate: once a trajectory touches 1 before y = 1, every larger xi does
// too.  The critical solution is reported from the subcritical side of the
// final bracket, since that trajectory exists on the whole interval.

#include <string>
#include <vector>

#include "lsmp/grid.hpp"
#include "lsmp/ode.hpp"
#include "lsmp/types.hpp"

namespace lsmp {

struct Classification {
    enum class Kind {
        Subcritical,    // Completed with max h < 1; value = h at the right cutoff
        Supercritical,  // HitOne or Exploded; value = y where that happened
        Indeterminate,  // step-size underflow; value = y of the failure
    };
    Kind kind;
    double value;
    TrajectoryStatus status;  // raw integrator outcome behind the verdict

    bool subcritical() const { return kind == Kind::Subcritical; }
    bool supercritical() const { return kind == Kind::Supercritical; }
};

Classification classify(const ModelParams& params, const IntegratorConfig& cfg);

struct Bracket {
    double lo;  // classified Subcritical
    double hi;  // classified Supercritical
    double width() const { return hi - lo; }
};

// lo = sigma_D^2 (A - gamma) / 2 is subcritical for every admissible
// parameter set; hi is found by geometric doubling (at most 20 doublings).
// Throws if lo fails to classify as subcritical or the doubling cap is hit.
Bracket initial_bracket(double gamma, double sigma_D, double A, const IntegratorConfig& cfg);

struct CriticalSolution {
    double xi0;        // subcritical end of the final bracket
    SolutionGrid grid; // trajectory at xi0
    double L;          // lim e^{I(y)} as y -> 1, extrapolated
    double hprime1;    // lim (1 - h(y))/(1 - y), extrapolated
    std::vector<Bracket> bracket_history;  // initial bracket plus one entry per bisection step
    double xi_tol;
};

// Bisect on classify() until the bracket width is <= xi_tol (>= 1e-12), then
// certify the subcritical-side solution:
//   * 0 < h <= 1 + 1e-9 on the grid,
//   * L in (0,1),
//   * bracket widths strictly decreasing, final width <= xi_tol,
//   * e^{I} >= sigma_D^2 (A - gamma)/xi0 - 1e-3 on y <= 1 - 1e-3 (the last
//     stretch is excluded: at finite bracket width the subcritical trajectory
//     departs from the critical one in a terminal layer where e^{I}
//     legitimately dips below the limit, and the layer widens as the landing
//     value gamma/A drops).
// Any violation, an indeterminate classification, or a bracketing failure
// throws with the bracket history formatted into the message.
//
// L extrapolates e^{I(1-eps)} over eps in {1e-2, 1e-3, 1e-4} with correction
// exponents {1, 1+gamma}; hprime1 extrapolates the difference quotient
// (1 - h(1-eps))/eps over eps in {1e-2, 3e-3, 1e-3} with exponents
// {gamma, 1}.  Quotients at finer eps sit inside the terminal layer and are
// contaminated, so the ladder deliberately stays coarse; both exponent sets
// are empirical (validated against the closed-form identities in tests).
CriticalSolution find_critical(double gamma, double sigma_D, double A, double xi_tol,
                               const IntegratorConfig& cfg);

// Grid CSV (same format as SolutionGrid::write_csv) plus a key=value sidecar
// with xi0, L, hprime1, gamma, sigma_D, A, xi_tol.
void write_critical_solution(const CriticalSolution& sol, const std::string& grid_csv_path,
                             const std::string& meta_path);

}  // namespace lsmp
