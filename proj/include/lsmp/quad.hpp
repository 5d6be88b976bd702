#pragma once

// Gauss-Legendre quadrature building blocks.  Nodes are generated once by
// Newton iteration on the Legendre recurrence (machine accurate for any
// order), and the singular-weight integrals that show up near y=0 and y=1 are
// transformed analytically so the quadrature only ever sees smooth integrands:
//
//   int_0^Y t^p g(t) dt  =  Y^{p+1}/(p+1) * int_0^1 g(Y u^{1/(p+1)}) du,  p > -1.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lsmp {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule (cached per order).
const GaussRule& gauss_rule(int n = 20);

template <typename F>
double gauss(const F& f, double a, double b, int n = 20) {
    const GaussRule& r = gauss_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return half * s;
}

template <typename F>
double gauss_panels(const F& f, double a, double b, int panels, int n = 20) {
    double s = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double x0 = a + (b - a) * k / panels;
        const double x1 = a + (b - a) * (k + 1) / panels;
        s += gauss(f, x0, x1, n);
    }
    return s;
}

// Panel-doubling until two successive composite estimates agree.
template <typename F>
double gauss_adaptive(const F& f, double a, double b, double tol = 1e-13, int max_panels = 256) {
    double prev = gauss_panels(f, a, b, 1);
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        const double cur = gauss_panels(f, a, b, panels);
        if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;  // best effort; callers doing certification re-check stability themselves
}

// int_0^Y t^p g(t) dt with p > -1 and g smooth on [0, Y]: substitute
// t = Y u^{1/(p+1)} so the weight disappears.
template <typename F>
double weighted_power_integral(const F& g, double p, double Y, double tol = 1e-13) {
    if (Y == 0.0) return 0.0;
    if (!(p > -1.0)) throw std::invalid_argument("weighted_power_integral: need p > -1");
    const double q = 1.0 / (p + 1.0);
    auto smooth = [&](double u) { return g(Y * std::pow(u, q)); };
    return std::pow(Y, p + 1.0) * q * gauss_adaptive(smooth, 0.0, 1.0, tol);
}

// Trapezoid rule over tabulated samples (diagnostic integrals on solver grids).
double trapezoid(const std::vector<double>& x, const std::vector<double>& v);

}  // namespace lsmp
