#pragma once

// The augmented Riccati initial-value problem and its two independent
// solvers: an adaptive Dormand-Prince integrator (the workhorse) and a local
// Picard fixed-point iteration of the equivalent integral equation (the
// oracle used to validate the startup series near the singular left end).

#include <optional>
#include <vector>

#include "lsmp/grid.hpp"
#include "lsmp/types.hpp"

namespace lsmp {

// a0(y) = gamma(1+gamma)/y; a1(y) = ((2 gamma + 1) y - (1+gamma))/y.
double coeff_a0(double gamma, double y);
double coeff_a1(double gamma, double y);

// Quadratic coefficient of the Riccati term: either the path-dependent form
// (xi/sigma_D^2) e^I - A or a constant (the comparison-oracle family).
class QuadCoeff {
  public:
    static QuadCoeff path_dependent(double xi_over_sd2, double A) {
        return QuadCoeff{false, 0.0, xi_over_sd2, A};
    }
    static QuadCoeff constant(double a3) { return QuadCoeff{true, a3, 0.0, 0.0}; }

    double operator()(double I) const;
    double at_zero() const { return (*this)(0.0); }

  private:
    QuadCoeff(bool c, double a3, double x, double A) : constant_(c), a3_(a3), xi_over_sd2_(x), A_(A) {}
    bool constant_;
    double a3_;
    double xi_over_sd2_;
    double A_;
};

struct Deriv {
    double dh;
    double dI;
};

// Right-hand side of the augmented system.  The a0 and a1 terms nearly cancel
// as y -> 0 (both are O(1/y) while their sum stays bounded), so they are
// evaluated in a regrouped form that performs the cancellation analytically:
//
//   dh = [ (1+gamma)(gamma - h) + y((2 gamma + 1) h - gamma(1+gamma)) ] / (y(1-y))
//        + a2 h^2 / (1-y),
//   dI = (h - 1)/(1-y).
Deriv rhs(double gamma, const QuadCoeff& a2, const AugmentedState& s);
Deriv rhs(const ModelParams& p, const AugmentedState& s);

// First-order slope of the startup series h(y) = gamma + s1 y + O(y^2),
// obtained by matching both sides of the ODE as y -> 0:
//   s1 = gamma^2 (1 + a2(0)) / (2 + gamma).
// The value is cross-validated against picard_local before use (see tests).
double series_slope(double gamma, double a2_at_zero);

// Series-regularized start at y = delta: (delta, gamma + s1 delta, (gamma-1) delta).
AugmentedState series_start(const ModelParams& p, double delta);

enum class TrajectoryStatus {
    Completed,     // reached y = 1 - end_offset with h < 1 throughout
    HitOne,        // first accepted node with h >= 1 (supercritical signature)
    Exploded,      // h >= explosion_cap, or step underflow while h was growing
    StepUnderflow  // required step < min_step without growth in h: a genuine
                   // integration failure, never coerced into Exploded
};

struct TrajectoryOutcome {
    TrajectoryStatus status;
    double y_stop;      // terminal y: 1-eps, y_hit, or y of the failure
    SolutionGrid grid;  // accepted nodes up to and including y_stop

    bool completed() const { return status == TrajectoryStatus::Completed; }
};

// Integrate the augmented system from `start` (with the given startup slope
// recorded for sub-grid evaluation).  `stop_at_one` enables the h >= 1 stop;
// the constant-coefficient oracle family disables it because its solutions
// legitimately touch 1 at the right endpoint.
TrajectoryOutcome integrate_model(double gamma, const QuadCoeff& a2, const AugmentedState& start,
                                  double slope, const IntegratorConfig& cfg, bool stop_at_one,
                                  std::optional<ModelParams> params_for_grid = std::nullopt);

// Full problem: series start at cfg.start_offset, stop at h >= 1.
TrajectoryOutcome integrate(const ModelParams& p, const IntegratorConfig& cfg);

// Picard iteration of the integral form on [0, delta]:
//
//   T(f)(y) = (1/phi(y)) int_0^y phi(t) [ a0(t) + a2(f,t) f(t)^2/(1-t) ] dt,
//   phi(y) = y^{1+gamma} (1-y)^gamma,
//
// starting from f = gamma.  The t^{1+gamma} weight is removed analytically by
// the substitution t = y u^{1/(p+1)} before quadrature, and the prefactor
// y^{1+gamma} cancels exactly, so no near-zero powers are ever formed.
struct PicardReport {
    SolutionGrid grid;                 // final iterate sampled on n_grid nodes in (0, delta]
    std::vector<double> sup_distances; // ||f_{k+1} - f_k||_inf per iteration
    bool contracting;                  // last distance <= previous distance
};

PicardReport picard_local(const ModelParams& p, double delta, int n_iter = 20, int n_grid = 64);

}  // namespace lsmp
