#include "lsmp/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsmp/interp.hpp"
#include "lsmp/quad.hpp"

namespace lsmp {

double coeff_a0(double gamma, double y) {
    if (!(y > 0.0)) throw std::domain_error("coeff_a0: need y > 0");
    return gamma * (1.0 + gamma) / y;
}

double coeff_a1(double gamma, double y) {
    if (!(y > 0.0)) throw std::domain_error("coeff_a1: need y > 0");
    return ((2.0 * gamma + 1.0) * y - (1.0 + gamma)) / y;
}

double QuadCoeff::operator()(double I) const {
    return constant_ ? a3_ : xi_over_sd2_ * std::exp(I) - A_;
}

Deriv rhs(double gamma, const QuadCoeff& a2, const AugmentedState& s) {
    if (!(s.y > 0.0 && s.y < 1.0)) throw std::domain_error("rhs: need y in (0,1)");
    const double omy = 1.0 - s.y;
    const double lin = ((1.0 + gamma) * (gamma - s.h) +
                        s.y * ((2.0 * gamma + 1.0) * s.h - gamma * (1.0 + gamma))) /
                       (s.y * omy);
    const double quad = a2(s.I) * s.h * s.h / omy;
    return {lin + quad, (s.h - 1.0) / omy};
}

Deriv rhs(const ModelParams& p, const AugmentedState& s) {
    return rhs(p.gamma, QuadCoeff::path_dependent(p.xi_over_sd2(), p.A), s);
}

double series_slope(double gamma, double a2_at_zero) {
    return gamma * gamma * (1.0 + a2_at_zero) / (2.0 + gamma);
}

AugmentedState series_start(const ModelParams& p, double delta) {
    if (!(delta > 0.0 && delta <= 1e-3))
        throw std::domain_error("series_start: need delta in (0, 1e-3]");
    const double s1 = series_slope(p.gamma, p.xi_over_sd2() - p.A);
    return {delta, p.gamma + s1 * delta, (p.gamma - 1.0) * delta};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

double step_factor(double err) {
    if (err <= 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
}

}  // namespace

TrajectoryOutcome integrate_model(double gamma, const QuadCoeff& a2, const AugmentedState& start,
                                  double slope, const IntegratorConfig& cfg, bool stop_at_one,
                                  std::optional<ModelParams> params_for_grid) {
    cfg.validate();
    const double y_end = 1.0 - cfg.end_offset;
    SolutionGrid grid(gamma, slope, cfg.start_offset, cfg.end_offset, std::move(params_for_grid));
    grid.append(start);

    double y = start.y, h = start.h, I = start.I;
    auto f = [&](double yy, double hh, double II) { return rhs(gamma, a2, {yy, hh, II}); };

    // Degenerate starts (enormous xi can push the series value past the
    // stopping thresholds before the first step).
    if (stop_at_one && h >= 1.0) return {TrajectoryStatus::HitOne, y, std::move(grid)};
    if (h >= cfg.explosion_cap) return {TrajectoryStatus::Exploded, y, std::move(grid)};

    // Step underflow while h was growing above 1 is blow-up being resolved;
    // underflow anywhere else is a genuine integration failure.
    auto underflow_outcome = [&]() -> TrajectoryOutcome {
        const Deriv d = f(y, h, I);
        if (h >= 1.0 && d.dh > 0.0) return {TrajectoryStatus::Exploded, y, std::move(grid)};
        return {TrajectoryStatus::StepUnderflow, y, std::move(grid)};
    };

    // The left end is stiff (Jacobian ~ -(1+gamma)/y), so the first step is
    // tied to the distance from the singularity; the controller grows it.
    double dt = std::min(cfg.max_step, 0.05 * y);
    Deriv k1 = f(y, h, I);

    while (y < y_end) {
        const double step = std::min(dt, y_end - y);

        const Deriv k2 = f(y + C2 * step, h + step * (A21 * k1.dh), I + step * (A21 * k1.dI));
        const Deriv k3 = f(y + C3 * step, h + step * (A31 * k1.dh + A32 * k2.dh),
                           I + step * (A31 * k1.dI + A32 * k2.dI));
        const Deriv k4 = f(y + C4 * step, h + step * (A41 * k1.dh + A42 * k2.dh + A43 * k3.dh),
                           I + step * (A41 * k1.dI + A42 * k2.dI + A43 * k3.dI));
        const Deriv k5 =
            f(y + C5 * step, h + step * (A51 * k1.dh + A52 * k2.dh + A53 * k3.dh + A54 * k4.dh),
              I + step * (A51 * k1.dI + A52 * k2.dI + A53 * k3.dI + A54 * k4.dI));
        const Deriv k6 = f(
            y + step, h + step * (A61 * k1.dh + A62 * k2.dh + A63 * k3.dh + A64 * k4.dh + A65 * k5.dh),
            I + step * (A61 * k1.dI + A62 * k2.dI + A63 * k3.dI + A64 * k4.dI + A65 * k5.dI));

        const double h_new =
            h + step * (B1 * k1.dh + B3 * k3.dh + B4 * k4.dh + B5 * k5.dh + B6 * k6.dh);
        const double I_new =
            I + step * (B1 * k1.dI + B3 * k3.dI + B4 * k4.dI + B5 * k5.dI + B6 * k6.dI);

        if (!std::isfinite(h_new) || !std::isfinite(I_new)) {
            dt = 0.2 * step;
            if (dt < cfg.min_step) return underflow_outcome();
            continue;
        }

        const Deriv k7 = f(y + step, h_new, I_new);  // FSAL stage
        const double err_h =
            step * (E1 * k1.dh + E3 * k3.dh + E4 * k4.dh + E5 * k5.dh + E6 * k6.dh + E7 * k7.dh);
        const double err_I =
            step * (E1 * k1.dI + E3 * k3.dI + E4 * k4.dI + E5 * k5.dI + E6 * k6.dI + E7 * k7.dI);
        const double sc_h = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(h), std::abs(h_new));
        const double sc_I = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(I), std::abs(I_new));
        const double err =
            std::sqrt(0.5 * ((err_h / sc_h) * (err_h / sc_h) + (err_I / sc_I) * (err_I / sc_I)));

        if (!std::isfinite(err)) {
            dt = 0.2 * step;
            if (dt < cfg.min_step) return underflow_outcome();
            continue;
        }

        if (err <= 1.0) {
            y += step;
            h = h_new;
            I = I_new;
            k1 = k7;
            grid.append({y, h, I});
            if (stop_at_one && h >= 1.0) return {TrajectoryStatus::HitOne, y, std::move(grid)};
            if (h >= cfg.explosion_cap) return {TrajectoryStatus::Exploded, y, std::move(grid)};
            dt = std::min(cfg.max_step, step * step_factor(err));
        } else {
            dt = step * std::min(step_factor(err), 1.0);
            if (dt < cfg.min_step) return underflow_outcome();
        }
    }
    return {TrajectoryStatus::Completed, y, std::move(grid)};
}

TrajectoryOutcome integrate(const ModelParams& p, const IntegratorConfig& cfg) {
    const AugmentedState y0 = series_start(p, cfg.start_offset);
    const double s1 = series_slope(p.gamma, p.xi_over_sd2() - p.A);
    return integrate_model(p.gamma, QuadCoeff::path_dependent(p.xi_over_sd2(), p.A), y0, s1, cfg,
                           /*stop_at_one=*/true, p);
}

PicardReport picard_local(const ModelParams& p, double delta, int n_iter, int n_grid) {
    if (!(delta > 0.0 && delta <= 0.5))
        throw std::domain_error("picard_local: need delta in (0, 1/2]");
    if (n_iter < 1 || n_grid < 8)
        throw std::invalid_argument("picard_local: need n_iter >= 1, n_grid >= 8");

    const double g = p.gamma;
    const QuadCoeff a2 = QuadCoeff::path_dependent(p.xi_over_sd2(), p.A);

    // Nodes include y = 0 as interpolation anchor (f(0) = gamma, I(0) = 0).
    std::vector<double> y(n_grid + 1);
    for (int j = 0; j <= n_grid; ++j) y[j] = delta * j / n_grid;
    std::vector<double> f(n_grid + 1, g), I(n_grid + 1, 0.0);

    std::vector<double> distances;
    for (int iter = 0; iter < n_iter; ++iter) {
        const Pchip f_cur(y, f);
        for (int j = 1; j <= n_grid; ++j) {
            auto dI = [&](double q) { return (f_cur(q) - 1.0) / (1.0 - q); };
            I[j] = I[j - 1] + gauss(dI, y[j - 1], y[j]);
        }
        const Pchip I_cur(y, I);

        // T(f)(Y) (integral form of the ODE) with the t^{1+gamma} weight of
        // phi removed analytically; the y^{1+gamma} prefactor cancels exactly:
        //   T(f)(Y) = [ gamma*J0 + Y*J2/(2+gamma) ] / (1-Y)^gamma,
        //   J0 = int_0^1 (1 - Y u^{1/(1+gamma)})^gamma du,
        //   J2 = int_0^1 G(Y u^{1/(2+gamma)}) du,  G(t) = (1-t)^{gamma-1} a2(I(t)) f(t)^2.
        std::vector<double> fn(n_grid + 1);
        fn[0] = g;
        double dist = 0.0;
        for (int j = 1; j <= n_grid; ++j) {
            const double Y = y[j];
            const double p0 = 1.0 / (1.0 + g), p2 = 1.0 / (2.0 + g);
            auto j0 = [&](double u) { return std::pow(1.0 - Y * std::pow(u, p0), g); };
            auto j2 = [&](double u) {
                const double t = Y * std::pow(u, p2);
                const double ft = f_cur(t);
                return std::pow(1.0 - t, g - 1.0) * a2(I_cur(t)) * ft * ft;
            };
            const double J0 = gauss_adaptive(j0, 0.0, 1.0, 3e-13);
            const double J2 = gauss_adaptive(j2, 0.0, 1.0, 3e-13);
            fn[j] = (g * J0 + Y * J2 / (2.0 + g)) / std::pow(1.0 - Y, g);
            dist = std::max(dist, std::abs(fn[j] - f[j]));
        }
        f = std::move(fn);
        distances.push_back(dist);
        if (dist == 0.0) break;
    }

    const std::size_t n = distances.size();
    const bool contracting = n < 2 || distances[n - 1] <= distances[n - 2];

    // Refresh I so the reported grid is consistent with the final iterate.
    const Pchip f_fin(y, f);
    for (int j = 1; j <= n_grid; ++j) {
        auto dI = [&](double q) { return (f_fin(q) - 1.0) / (1.0 - q); };
        I[j] = I[j - 1] + gauss(dI, y[j - 1], y[j]);
    }

    SolutionGrid grid(g, series_slope(g, a2.at_zero()), y[1], 1.0 - delta, p);
    for (int j = 1; j <= n_grid; ++j) grid.append({y[j], f[j], I[j]});
    return {std::move(grid), std::move(distances), contracting};
}

}  // namespace lsmp
