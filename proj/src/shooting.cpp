#include "lsmp/shooting.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "lsmp/extrap.hpp"

namespace lsmp {

namespace {

std::string format_history(const std::vector<Bracket>& history) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& b : history) os << "\n  [" << b.lo << ", " << b.hi << "]";
    return os.str();
}

}  // namespace

Classification classify(const ModelParams& params, const IntegratorConfig& cfg) {
    const TrajectoryOutcome out = integrate(params, cfg);
    switch (out.status) {
        case TrajectoryStatus::Completed:
            if (out.grid.max_h() < 1.0)
                return {Classification::Kind::Subcritical, out.grid.points().back().h, out.status};
            // Defensive: the h >= 1 stop should fire first.
            return {Classification::Kind::Supercritical, out.y_stop, out.status};
        case TrajectoryStatus::HitOne:
        case TrajectoryStatus::Exploded:
            return {Classification::Kind::Supercritical, out.y_stop, out.status};
        case TrajectoryStatus::StepUnderflow:
        default:
            return {Classification::Kind::Indeterminate, out.y_stop, out.status};
    }
}

Bracket initial_bracket(double gamma, double sigma_D, double A, const IntegratorConfig& cfg) {
    const double xi_lo = sigma_D * sigma_D * (A - gamma) / 2.0;
    const ModelParams base(gamma, sigma_D, A, xi_lo);  // validates the triple as well

    Classification lo_cls = classify(base, cfg);
    if (!lo_cls.subcritical())
        throw std::runtime_error(
            "initial_bracket: xi = sigma_D^2 (A-gamma)/2 did not classify as subcritical; "
            "tighten the integrator tolerances");

    double hi = xi_lo;
    for (int k = 0; k < 20; ++k) {
        hi *= 2.0;
        Classification cls = classify(base.with_xi(hi), cfg);
        if (cls.supercritical()) return Bracket{xi_lo, hi};
        if (cls.kind == Classification::Kind::Indeterminate)
            throw std::runtime_error("initial_bracket: indeterminate trajectory at xi = " +
                                     std::to_string(hi));
    }
    throw std::runtime_error("initial_bracket: no supercritical xi within 2^20 * xi_lo");
}

CriticalSolution find_critical(double gamma, double sigma_D, double A, double xi_tol,
                               const IntegratorConfig& cfg) {
    if (!(xi_tol >= 1e-12))
        throw std::invalid_argument("find_critical: xi_tol must be >= 1e-12");
    cfg.validate();

    const Bracket start = initial_bracket(gamma, sigma_D, A, cfg);
    std::vector<Bracket> history{start};

    const ModelParams base(gamma, sigma_D, A, start.lo);
    // The subcritical endpoint of the running bracket, kept current so the
    // final grid is the trajectory at xi0 itself rather than a re-solve.
    TrajectoryOutcome best = integrate(base, cfg);
    if (!best.completed())
        throw std::runtime_error("find_critical: lost the subcritical anchor at xi_lo" +
                                 format_history(history));

    double lo = start.lo, hi = start.hi;
    while (hi - lo > xi_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
        TrajectoryOutcome out = integrate(base.with_xi(mid), cfg);
        if (out.completed() && out.grid.max_h() < 1.0) {
            lo = mid;
            best = std::move(out);
        } else if (out.status == TrajectoryStatus::StepUnderflow) {
            throw std::runtime_error("find_critical: indeterminate trajectory at xi = " +
                                     std::to_string(mid) + format_history(history));
        } else {
            hi = mid;
        }
        history.push_back(Bracket{lo, hi});
    }

    CriticalSolution sol{lo, std::move(best.grid), 0.0, 0.0, std::move(history), xi_tol};
    const SolutionGrid& g = sol.grid;

    for (std::size_t i = 1; i < sol.bracket_history.size(); ++i)
        if (!(sol.bracket_history[i].width() < sol.bracket_history[i - 1].width()))
            throw std::runtime_error("find_critical: bracket widths not strictly decreasing" +
                                     format_history(sol.bracket_history));
    if (!(sol.bracket_history.back().width() <= xi_tol))
        throw std::runtime_error("find_critical: final bracket wider than xi_tol" +
                                 format_history(sol.bracket_history));

    // h stays positive and below 1 on the last subcritical trajectory.  A
    // lower bound at gamma would be wrong in general: when xi0/sigma_D^2 < A
    // the startup slope is negative, and every subcritical trajectory
    // ultimately relaxes towards gamma/A < gamma inside the terminal layer.
    if (!(g.min_h() > 0.0 && g.max_h() <= 1.0 + 1e-9))
        throw std::runtime_error("find_critical: h left the certified band (0, 1+1e-9]");

    const std::vector<double> eps_L{1e-2, 1e-3, 1e-4};
    std::vector<double> expI;
    for (double e : eps_L) expI.push_back(g.eval_exp_I(1.0 - e));
    sol.L = power_law_limit(eps_L, expI, {1.0, 1.0 + gamma});
    if (!(sol.L > 0.0 && sol.L < 1.0))
        throw std::runtime_error("find_critical: extrapolated L outside (0,1)");

    const std::vector<double> eps_h{1e-2, 3e-3, 1e-3};
    std::vector<double> quot;
    for (double e : eps_h) quot.push_back((1.0 - g.eval_h(1.0 - e)) / e);
    sol.hprime1 = power_law_limit(eps_h, quot, {gamma, 1.0});

    // e^{I} decreases monotonically towards its limit L, but inside the
    // terminal layer it briefly undershoots before the run stops; the layer
    // widens as h's landing value gamma/A drops, so the floor is only
    // checked outside y > 1 - 1e-3.
    const double floor = sigma_D * sigma_D * (A - gamma) / sol.xi0 - 1e-3;
    for (const auto& pt : g.points()) {
        if (pt.y > 1.0 - 1e-3) break;
        if (!(std::exp(pt.I) >= floor))
            throw std::runtime_error("find_critical: e^{I} fell below the monotone floor at y = " +
                                     std::to_string(pt.y));
    }

    return sol;
}

void write_critical_solution(const CriticalSolution& sol, const std::string& grid_csv_path,
                             const std::string& meta_path) {
    sol.grid.write_csv(grid_csv_path);
    std::FILE* fp = std::fopen(meta_path.c_str(), "w");
    if (!fp) throw std::runtime_error("write_critical_solution: cannot open " + meta_path);
    const ModelParams* p = sol.grid.params() ? &*sol.grid.params() : nullptr;
    std::fprintf(fp, "xi0=%.17g\n", sol.xi0);
    std::fprintf(fp, "L=%.17g\n", sol.L);
    std::fprintf(fp, "hprime1=%.17g\n", sol.hprime1);
    if (p) {
        std::fprintf(fp, "gamma=%.17g\n", p->gamma);
        std::fprintf(fp, "sigma_D=%.17g\n", p->sigma_D);
        std::fprintf(fp, "A=%.17g\n", p->A);
    }
    std::fprintf(fp, "xi_tol=%.17g\n", sol.xi_tol);
    std::fclose(fp);
}

}  // namespace lsmp
