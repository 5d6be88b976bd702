#pragma once

// Joint simulation of the dividend GBM and the degenerate state process Y on
// a shared Brownian driver, plus the Monte Carlo verification of the two
// expectation identities the closed forms imply:
//
//   E[ int_0^inf e^{-beta t} D_t^{1-gamma} dt ]              (log-normal closed form)
//   E[ int_0^inf e^{-beta u} (D_u (1-Y_u))^{1-gamma} du ]    = g(Y_0) D_0^{1-gamma}
//
// D uses its exact log-normal update; Y uses Euler-Maruyama on the same
// Gaussian increments (mixing exact with Euler keeps the joint driver while
// removing one bias source).  Both integrals are truncated at a finite
// horizon with the truncation accounted for analytically.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lsmp/equilibrium.hpp"
#include "lsmp/shooting.hpp"

namespace lsmp {

struct SimConfig {
    double dt = 0.1;            // base time step (<= 1e-3 * horizon recommended)
    double horizon = 100.0;     // T
    std::size_t n_paths = 100000;
    std::uint64_t seed = 12345;
    double clamp_margin = 1e-12; // Y is clamped to [margin, 1-margin]
    int n_threads = 0;          // 0 = hardware concurrency

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::optional<double> analytic;
    double z_score = 0.0;  // (mean - analytic)/std_error when analytic is present
};

// Per-path outputs; the ensemble keeps one record per path so that the
// reduction order is fixed and results do not depend on thread scheduling.
struct PathResult {
    double D_T = 0.0;
    double Y_T = 0.0;
    double div_integral = 0.0;  // int_0^T e^{-beta t} D_t^{1-gamma} dt, trapezoid
    double fk_integral = 0.0;   // int_0^T e^{-beta u} (D_u (1-Y_u))^{1-gamma} du
    std::uint64_t n_substeps = 0;
    std::uint64_t n_clamps = 0;
    std::uint64_t n_forced = 0;  // base steps finished by the sub-step guard
};

struct EnsembleResult {
    std::vector<PathResult> paths;
    std::uint64_t total_substeps = 0;
    std::uint64_t total_clamps = 0;
    std::uint64_t total_forced = 0;

    double clamp_rate() const {
        return total_substeps ? static_cast<double>(total_clamps) / total_substeps : 0.0;
    }
};

// Advance the pair (D, Y) path by path.  Within each base step the Y update
// is sub-divided so that
//   |mu_Y| * dt_local     <= 0.1 * distance-to-boundary   (drift rule), and
//   sigma_Y * sqrt(dt_local) <= distance-to-boundary / 6  (noise rule);
// the Gaussian sub-increments are accumulated and D jumps over the whole
// base step with their sum, keeping the two processes on one Brownian path.
// The noise rule matters on the left: sigma_Y(0+) = sigma_D/gamma does not
// vanish, so without it a 3-sigma draw from small y lands below zero no
// matter how small dt is.  With both rules a sub-step can escape the
// boundary band only through a >= 6-sigma Gaussian move (~1e-9 per
// sub-step), which is what keeps the clamp counters at zero in practice.
// After every sub-step Y is clamped to [margin, 1-margin]; the boundaries
// are inaccessible for the continuous process, so a clamp rate above 0.1% of
// sub-steps aborts with an error (it indicates a discretization problem).
//
// gauss_per_substep (1 or 2) sets how many standard normals are summed into
// each sub-increment.  The law is unchanged; its use is coupling: a run at
// dt with 2 draws consumes the per-path stream exactly like a run at dt/2
// with 1 draw, so the two runs ride the same Brownian skeleton and their
// difference isolates the time-discretization error from the Monte Carlo
// noise (up to the rare sub-divided steps, which desynchronize a path).
EnsembleResult simulate_joint(const CriticalSolution& crit, const EconomyParams& econ, double Y0,
                              const SimConfig& cfg, int gauss_per_substep = 1);

// Reduce per-path values to mean / standard error / z-score.
McEstimate reduce(const std::vector<double>& values, std::optional<double> analytic);

// E[int_0^inf e^{-beta t} D_t^{1-gamma} dt]: simulate D alone (no Y), apply
// the trapezoid in t, add the deterministic tail integral
// D_0^{1-gamma} e^{-cT}/c with c = beta - (1-gamma)(mu_D - gamma sigma_D^2/2)
// (the integrand's expectation decays at exactly that rate), and compare to
// the closed form D_0^{1-gamma}/c.  Errors out if the tail exceeds 1% of the
// closed form (horizon too short).
McEstimate mc_dividend_integral(const EconomyParams& econ, const SimConfig& cfg);

// E[int_0^inf e^{-beta u} (D_u(1-Y_u))^{1-gamma} du] versus the analytic
// g(Y0) D_0^{1-gamma}.  The truncated tail is bounded by the dividend
// integral's tail (since 1-Y <= 1), which the same 1% horizon check keeps
// negligible against the Monte Carlo error.  gauss_per_substep as in
// simulate_joint (coupled weak-convergence studies).
McEstimate mc_feynman_kac(const CriticalSolution& crit, const EconomyParams& econ, double Y0,
                          const SimConfig& cfg, int gauss_per_substep = 1);

// Deterministic residuals of the wealth dynamics identity
//   d(D g(Y)(1-Y)^gamma) = (r(Y) D g(Y)(1-Y)^gamma - D(1-Y)) dt:
// expanding by Ito with phi = g(y)(1-y)^gamma, the dB coefficient
// sigma_D phi + sigma_Y phi' must vanish and the dt coefficient must match.
// Returns max(|diffusion residual|, |drift residual|), both relative.
// Valid on the interior margins [1e-3, 1-1e-3].
double wealth_ode_residual(const CriticalSolution& crit, const EconomyParams& econ, double y);

// Summary CSV `quantity,mean,std_error,analytic,z`.
struct SummaryRow {
    std::string quantity;
    McEstimate estimate;
};
void write_mc_csv(const std::string& path, const std::vector<SummaryRow>& rows);

// Optional per-path dump `path,D_T,Y_T,div_integral,fk_integral,n_substeps,n_clamps`.
void write_paths_csv(const std::string& path, const EnsembleResult& ens);

}  // namespace lsmp
