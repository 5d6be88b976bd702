#pragma once

// Core value types shared by the ODE, shooting, and equilibrium layers.

#include <stdexcept>
#include <string>

namespace lsmp {

// Parameters of the augmented Riccati problem
//
//   h'(y) = a0(y) + a1(y) h/(1-y) + a2(h,y) h^2/(1-y),    h(0) = gamma,
//
// where a0(y) = gamma(1+gamma)/y, a1(y) = ((2 gamma + 1) y - (1+gamma))/y and
// the path-dependent coefficient a2(h,y) = (xi/sigma_D^2) e^{I(y)} - A with
// I(y) = int_0^y (h(q)-1)/(1-q) dq.  Carrying I as a second state variable
// makes the problem an ordinary 2-D initial-value problem.
struct ModelParams {
    double gamma;    // risk aversion, in (0,1)
    double sigma_D;  // dividend volatility, > 0
    double A;        // dimensionless constant, > 1
    double xi;       // shooting parameter, > 0

    ModelParams(double gamma_, double sigma_D_, double A_, double xi_)
        : gamma(gamma_), sigma_D(sigma_D_), A(A_), xi(xi_) {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw std::invalid_argument("ModelParams: gamma must lie in (0,1), got " +
                                        std::to_string(gamma_));
        if (!(sigma_D > 0.0))
            throw std::invalid_argument("ModelParams: sigma_D must be positive");
        if (!(A > 1.0))
            throw std::invalid_argument("ModelParams: A must exceed 1, got " + std::to_string(A_));
        if (!(xi > 0.0))
            throw std::invalid_argument("ModelParams: xi must be positive");
    }

    double xi_over_sd2() const { return xi / (sigma_D * sigma_D); }

    // Same (gamma, sigma_D, A) with a different shooting parameter.
    ModelParams with_xi(double xi_) const { return ModelParams(gamma, sigma_D, A, xi_); }
};

// One point of the augmented trajectory.
struct AugmentedState {
    double y;  // position in [0,1)
    double h;  // solution value
    double I;  // running integral int_0^y (h-1)/(1-q) dq; <= 0 while h <= 1
};

// Knobs of the adaptive integrator.  The right endpoint is a logarithmic
// singularity, so end_offset must sit far below the shooting tolerance on xi.
struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double min_step = 1e-14;
    double explosion_cap = 1e3;
    double start_offset = 1e-6;  // delta: series start at y = delta
    double end_offset = 1e-8;    // epsilon: integrate up to y = 1 - epsilon
    // Cap on the step size.  Accuracy alone would allow much longer steps in
    // the middle of (0,1); the cap keeps the node spacing fine enough that
    // downstream cubic interpolation stays well below the solver tolerances.
    double max_step = 2e-3;

    void validate() const {
        if (!(rel_tol > 0.0 && abs_tol > 0.0 && min_step > 0.0))
            throw std::invalid_argument("IntegratorConfig: tolerances and min_step must be positive");
        if (!(max_step > min_step))
            throw std::invalid_argument("IntegratorConfig: max_step must exceed min_step");
        if (!(explosion_cap >= 10.0))
            throw std::invalid_argument("IntegratorConfig: explosion_cap must be >= 10");
        if (!(start_offset > 0.0 && start_offset < 1e-2))
            throw std::invalid_argument("IntegratorConfig: start_offset must lie in (0, 1e-2)");
        if (!(end_offset > 0.0 && end_offset < 1e-2))
            throw std::invalid_argument("IntegratorConfig: end_offset must lie in (0, 1e-2)");
    }
};

}  // namespace lsmp
