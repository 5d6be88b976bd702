// Command-line front end.  Subcommands map one-to-one onto the library
// layers; every run reads an optional INI config (--config), applies --set
// overrides, and writes CSV artifacts into the output directory (--out,
// [output] dir, or $LSMP_OUT_DIR, in that order of precedence).
//
// Exit codes: 0 success, 1 usage/configuration error, 2 numerical or
// verification failure (the thrown report is printed verbatim).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsmp/config.hpp"
#include "lsmp/equilibrium.hpp"
#include "lsmp/ode.hpp"
#include "lsmp/shooting.hpp"
#include "lsmp/simulate.hpp"
#include "lsmp/verify.hpp"

namespace {

using namespace lsmp;

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

void ensure_outdir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

std::string status_name(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::Completed: return "completed";
        case TrajectoryStatus::HitOne: return "hit-one";
        case TrajectoryStatus::Exploded: return "exploded";
        case TrajectoryStatus::StepUnderflow: return "step-underflow";
    }
    return "?";
}

int run_solve_ode(const RunConfig& rc) {
    const ModelParams p(rc.gamma, rc.sigma_D, rc.A, rc.xi);
    const TrajectoryOutcome o = integrate(p, rc.integrator);
    ensure_outdir(rc.out_dir);
    const std::string csv = join_path(rc.out_dir, "solution.csv");
    o.grid.write_csv(csv);
    std::cout << "solve-ode: xi=" << rc.xi << " status=" << status_name(o.status)
              << " y_stop=" << std::setprecision(12) << o.y_stop
              << " h_end=" << o.grid.points().back().h << " nodes=" << o.grid.size() << "\n"
              << "wrote " << csv << "\n";
    return 0;
}

int run_find_critical(const RunConfig& rc) {
    const CriticalSolution sol = find_critical(rc.gamma, rc.sigma_D, rc.A, rc.xi_tol, rc.integrator);
    ensure_outdir(rc.out_dir);
    const std::string csv = join_path(rc.out_dir, "critical.csv");
    const std::string meta = join_path(rc.out_dir, "critical_meta.txt");
    write_critical_solution(sol, csv, meta);
    std::cout << std::setprecision(12) << "find-critical: xi0=" << sol.xi0 << " L=" << sol.L
              << " h'(1)=" << sol.hprime1 << " brackets=" << sol.bracket_history.size() << "\n"
              << "wrote " << csv << " and " << meta << "\n";
    return 0;
}

void write_boundary_report(const BoundaryReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << std::setprecision(17);
    out << "anchor = " << rep.anchor << "\n";
    out << "left_divergence = " << (rep.left_divergence ? 1 : 0) << "\n";
    for (std::size_t i = 0; i < rep.k_left.size(); ++i)
        out << "s(2^-" << rep.k_left[i] << ") = " << rep.s_left[i] << "\n";
    for (std::size_t i = 0; i < rep.eps_right.size(); ++i)
        out << "s(1-" << rep.eps_right[i] << ") = " << rep.s_right[i] << "\n";
    out << "s_one = " << rep.s_one << "\n";
    out << "s_one_alt = " << rep.s_one_alt << "\n";
    out << "s_one_cauchy_rel = " << rep.s_one_cauchy_rel << "\n";
    out << "fitted_tail_rate = " << rep.fitted_tail_rate << "\n";
    out << "raw_pair_rel_change = " << rep.raw_pair_rel_change << "\n";
    out << "speed_ratio_min = " << rep.speed_ratio_min << "\n";
    out << "rho_weight_min = " << rep.rho_weight_min << "\n";
    out << "rho_weight_max = " << rep.rho_weight_max << "\n";
    out << "quad_refine_max_rel = " << rep.quad_refine_max_rel << "\n";
}

int run_equilibrium(const RunConfig& rc) {
    const CriticalSolution sol = find_critical(rc.gamma, rc.sigma_D, rc.A, rc.xi_tol, rc.integrator);
    ensure_outdir(rc.out_dir);
    const std::string csv = join_path(rc.out_dir, "equilibrium.csv");
    write_equilibrium_csv(sol, *rc.economy, csv, 1000);
    const BoundaryReport rep = boundary_diagnostics(sol);
    const std::string btxt = join_path(rc.out_dir, "boundary.txt");
    write_boundary_report(rep, btxt);
    std::cout << std::setprecision(12) << "equilibrium: xi0=" << sol.xi0
              << " g(0)=" << g_value(sol, 0.0) << " g(0.5)=" << g_value(sol, 0.5)
              << " s(1) extrapolated=" << rep.s_one << "\n"
              << "wrote " << csv << " and " << btxt << "\n";
    return 0;
}

int run_simulate(const RunConfig& rc, bool dump_paths) {
    const CriticalSolution sol = find_critical(rc.gamma, rc.sigma_D, rc.A, rc.xi_tol, rc.integrator);
    ensure_outdir(rc.out_dir);
    std::vector<SummaryRow> rows;
    rows.push_back({"dividend_integral", mc_dividend_integral(*rc.economy, rc.sim)});
    rows.push_back({"feynman_kac", mc_feynman_kac(sol, *rc.economy, rc.Y0, rc.sim)});
    const std::string csv = join_path(rc.out_dir, "mc_summary.csv");
    write_mc_csv(csv, rows);
    std::cout << std::setprecision(10);
    for (const auto& r : rows) {
        const McEstimate& e = r.estimate;
        std::cout << r.quantity << ": mean=" << e.mean << " se=" << e.std_error;
        if (e.analytic)
            std::cout << " analytic=" << *e.analytic << " z="
                      << (e.mean - *e.analytic) / e.std_error;
        std::cout << "\n";
    }
    std::cout << "wrote " << csv << "\n";
    if (dump_paths) {
        const EnsembleResult ens = simulate_joint(sol, *rc.economy, rc.Y0, rc.sim);
        const std::string pcsv = join_path(rc.out_dir, "paths.csv");
        write_paths_csv(pcsv, ens);
        std::cout << "wrote " << pcsv << " (clamped steps: " << ens.total_clamps
                  << ", forced finishes: " << ens.total_forced << ")\n";
    }
    return 0;
}

int run_sweep(const RunConfig& rc) {
    ensure_outdir(rc.out_dir);
    const std::string combined_path = join_path(rc.out_dir, "sweep.csv");
    std::ofstream combined(combined_path);
    if (!combined) throw std::runtime_error("cannot write '" + combined_path + "'");
    combined << "xi,y,h\n" << std::setprecision(17);
    for (std::size_t i = 0; i < rc.sweep_xi.size(); ++i) {
        const double xi = rc.sweep_xi[i];
        const TrajectoryOutcome o = integrate(ModelParams(rc.gamma, rc.sigma_D, rc.A, xi),
                                              rc.integrator);
        std::ostringstream name;
        name << "sweep_" << std::setw(2) << std::setfill('0') << (i + 1) << ".csv";
        const std::string csv = join_path(rc.out_dir, name.str());
        o.grid.write_csv(csv);
        for (const auto& pt : o.grid.points()) combined << xi << "," << pt.y << "," << pt.h << "\n";
        std::cout << "sweep: xi=" << std::setprecision(12) << xi
                  << " status=" << status_name(o.status) << " h_end=" << o.grid.points().back().h
                  << " -> " << csv << "\n";
    }
    std::cout << "wrote " << combined_path << "\n";
    return 0;
}

int run_verify_all(bool quick) {
    const std::vector<CriterionResult> results = run_acceptance(quick);
    const int failures = print_acceptance(results);
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"singular Riccati shooting, equilibrium quantities, and joint (D,Y) Monte Carlo"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_flag;
    std::string seed_flag;
    app.add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "override: section.key=value (repeatable, beats the file)");
    app.add_option("--out", out_flag, "output directory (beats [output] dir and $LSMP_OUT_DIR)");
    app.add_option("--seed", seed_flag, "simulation seed (beats [simulation] seed)");

    CLI::App* c_solve = app.add_subcommand("solve-ode", "integrate h,I at a fixed xi");
    CLI::App* c_crit = app.add_subcommand("find-critical", "bisect for the critical xi0");
    CLI::App* c_eq = app.add_subcommand("equilibrium", "tabulate g, mu_Y, sigma_Y, r, kappa");
    bool dump_paths = false;
    CLI::App* c_sim = app.add_subcommand("simulate", "joint (D,Y) Monte Carlo estimates");
    c_sim->add_flag("--paths", dump_paths, "also dump the per-path terminal summary");
    bool quick = false;
    CLI::App* c_ver = app.add_subcommand("verify-all", "run the acceptance battery");
    c_ver->add_flag("--quick", quick, "skip the two multi-minute Monte Carlo criteria");
    CLI::App* c_sweep = app.add_subcommand("sweep", "integrate a list of xi values ([sweep] xi)");
    for (CLI::App* sub : {c_solve, c_crit, c_eq, c_sim, c_ver, c_sweep}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (c_ver->parsed()) return run_verify_all(quick);  // pinned battery, no config

    RunConfig rc;
    try {
        Config cfg = config_path.empty() ? Config::parse_string("", "<defaults>")
                                         : Config::parse_file(config_path);
        for (const auto& o : overrides) cfg.apply_override(o);
        if (!out_flag.empty()) cfg.apply_override("output.dir=" + out_flag);
        if (!seed_flag.empty()) cfg.apply_override("simulation.seed=" + seed_flag);
        std::string mode = "sweep";
        if (c_solve->parsed()) mode = "solve-ode";
        if (c_crit->parsed()) mode = "find-critical";
        if (c_eq->parsed()) mode = "equilibrium";
        if (c_sim->parsed()) mode = "simulate";
        if (c_sweep->parsed()) mode = "sweep";
        rc = assemble_run_config(cfg, mode);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (rc.mode == "solve-ode") return run_solve_ode(rc);
        if (rc.mode == "find-critical") return run_find_critical(rc);
        if (rc.mode == "equilibrium") return run_equilibrium(rc);
        if (rc.mode == "simulate") return run_simulate(rc, dump_paths);
        return run_sweep(rc);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}
