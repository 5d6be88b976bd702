#include "lsmp/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lsmp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("expected a number, got '" + v + "'");
    }
    if (pos != v.size())
        throw std::runtime_error("trailing characters after number in '" + v + "'");
    return out;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& name) {
    Config cfg;
    cfg.name_ = name;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                parse_fail(name, line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) parse_fail(name, line, "empty section name");
            cfg.sections_[section];  // a section may legitimately stay empty
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            parse_fail(name, line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) parse_fail(name, line, "empty key");
        if (section.empty())
            parse_fail(name, line, "key '" + key + "' appears before any [section] header");
        auto& sec = cfg.sections_[section];
        if (sec.count(key))
            parse_fail(name, line,
                       "duplicate key '" + key + "' in [" + section + "] (first at line " +
                           std::to_string(sec[key].line) + ")");
        sec[key] = Entry{value, line, false};
    }
    return cfg;
}

void Config::apply_override(const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("--set: expected section.key=value, got '" + spec + "'");
    const std::string lhs = trim(spec.substr(0, eq));
    const std::string value = trim(spec.substr(eq + 1));
    const std::size_t dot = lhs.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
        throw std::runtime_error("--set: expected section.key=value, got '" + spec + "'");
    const std::string section = trim(lhs.substr(0, dot));
    const std::string key = trim(lhs.substr(dot + 1));
    sections_[section][key] = Entry{value, 0, false};
}

const Config::Entry* Config::find(const std::string& section, const std::string& key) const {
    const auto sit = sections_.find(section);
    if (sit == sections_.end()) return nullptr;
    const auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    return &kit->second;
}

const Config::Entry& Config::require(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e)
        throw std::runtime_error(name_ + ": missing required key '" + key + "' in [" + section +
                                 "]");
    return *e;
}

std::string Config::location(const Entry& e) const {
    return e.line > 0 ? name_ + ":" + std::to_string(e.line) : "<override>";
}

void Config::fail(const Entry& e, const std::string& section, const std::string& key,
                  const std::string& what) const {
    throw std::runtime_error(location(e) + ": [" + section + "] " + key + ": " + what);
}

bool Config::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    e.consumed = true;
    return e.value;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    return e->value;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const Entry& e = require(section, key);
    e.consumed = true;
    try {
        return to_double(e.value);
    } catch (const std::exception& ex) {
        fail(e, section, key, ex.what());
    }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    try {
        return to_double(e->value);
    } catch (const std::exception& ex) {
        fail(*e, section, key, ex.what());
    }
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::int64_t fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    std::size_t pos = 0;
    std::int64_t out = 0;
    try {
        out = std::stoll(e->value, &pos);
    } catch (const std::exception&) {
        fail(*e, section, key, "expected an integer, got '" + e->value + "'");
    }
    if (pos != e->value.size())
        fail(*e, section, key, "trailing characters after integer in '" + e->value + "'");
    return out;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    std::size_t pos = 0;
    std::uint64_t out = 0;
    try {
        if (!e->value.empty() && e->value[0] == '-') throw std::invalid_argument("negative");
        out = std::stoull(e->value, &pos);
    } catch (const std::exception&) {
        fail(*e, section, key, "expected a non-negative integer, got '" + e->value + "'");
    }
    if (pos != e->value.size())
        fail(*e, section, key, "trailing characters after integer in '" + e->value + "'");
    return out;
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
    const Entry& e = require(section, key);
    e.consumed = true;
    std::string v = e.value;
    for (char& c : v)
        if (c == ',') c = ' ';
    std::istringstream in(v);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        try {
            out.push_back(to_double(tok));
        } catch (const std::exception& ex) {
            fail(e, section, key, ex.what());
        }
    }
    if (out.empty()) fail(e, section, key, "expected at least one number");
    return out;
}

void Config::reject_unconsumed() const {
    std::string msg;
    for (const auto& [section, keys] : sections_)
        for (const auto& [key, e] : keys)
            if (!e.consumed)
                msg += "\n  " + location(e) + ": unknown key '" + key + "' in [" + section + "]";
    if (!msg.empty())
        throw std::runtime_error(name_ + ": unrecognized configuration for this mode:" + msg);
}

RunConfig assemble_run_config(const Config& cfg, const std::string& mode) {
    RunConfig rc;
    rc.mode = mode;

    rc.gamma = cfg.get_double("model", "gamma", 0.5);
    rc.sigma_D = cfg.get_double("model", "sigma_D", 0.2);
    if (!(rc.gamma > 0.0 && rc.gamma < 1.0))
        throw std::runtime_error("config: model.gamma must lie in (0,1)");
    if (!(rc.sigma_D > 0.0)) throw std::runtime_error("config: model.sigma_D must be positive");

    const bool needs_economy = (mode == "equilibrium" || mode == "simulate");
    if (needs_economy || cfg.has("economy", "beta")) {
        const double beta = cfg.get_double("economy", "beta", 0.025);
        const double mu_D = cfg.get_double("economy", "mu_D", 0.02);
        const double D0 = cfg.get_double("economy", "D0", 1.0);
        rc.economy = EconomyParams(beta, mu_D, rc.sigma_D, rc.gamma, D0);
    }

    if (cfg.has("model", "A")) {
        rc.A = cfg.get_double("model", "A");
        if (rc.economy) {
            const double derived = compute_A(*rc.economy);
            if (std::abs(derived - rc.A) > 1e-12)
                throw std::runtime_error(
                    "config: model.A = " + std::to_string(rc.A) +
                    " contradicts the [economy] block (A = " + std::to_string(derived) + ")");
        }
    } else if (rc.economy) {
        rc.A = compute_A(*rc.economy);
    }  // else: default A = 2

    if (mode == "solve-ode") {
        if (!cfg.has("model", "xi"))
            throw std::runtime_error("config: solve-ode requires model.xi");
        rc.xi = cfg.get_double("model", "xi");
        if (!(rc.xi > 0.0)) throw std::runtime_error("config: model.xi must be positive");
    }

    rc.integrator.rel_tol = cfg.get_double("integrator", "rel_tol", rc.integrator.rel_tol);
    rc.integrator.abs_tol = cfg.get_double("integrator", "abs_tol", rc.integrator.abs_tol);
    rc.integrator.max_step = cfg.get_double("integrator", "max_step", rc.integrator.max_step);
    rc.integrator.start_offset =
        cfg.get_double("integrator", "start_offset", rc.integrator.start_offset);
    rc.integrator.end_offset =
        cfg.get_double("integrator", "end_offset", rc.integrator.end_offset);
    rc.integrator.validate();
    rc.xi_tol = cfg.get_double("integrator", "xi_tol", rc.xi_tol);
    if (!(rc.xi_tol >= 1e-12)) throw std::runtime_error("config: integrator.xi_tol must be >= 1e-12");

    if (mode == "simulate") {
        rc.sim.dt = cfg.get_double("simulation", "dt", rc.sim.dt);
        rc.sim.horizon = cfg.get_double("simulation", "horizon", rc.sim.horizon);
        rc.sim.n_paths = static_cast<std::size_t>(
            cfg.get_u64("simulation", "n_paths", rc.sim.n_paths));
        rc.sim.seed = cfg.get_u64("simulation", "seed", rc.sim.seed);
        rc.sim.clamp_margin = cfg.get_double("simulation", "clamp_margin", rc.sim.clamp_margin);
        rc.sim.n_threads = static_cast<int>(cfg.get_int("simulation", "n_threads", rc.sim.n_threads));
        rc.sim.validate();
        rc.Y0 = cfg.get_double("simulation", "Y0", rc.Y0);
        if (!(rc.Y0 > 0.0 && rc.Y0 < 1.0))
            throw std::runtime_error("config: simulation.Y0 must lie in (0,1)");
    }

    if (mode == "sweep") rc.sweep_xi = cfg.get_double_list("sweep", "xi");

    std::string dir = cfg.get_string("output", "dir", "");
    if (dir.empty()) {
        const char* env = std::getenv("LSMP_OUT_DIR");
        dir = (env && *env) ? env : "out";
    }
    rc.out_dir = dir;

    cfg.reject_unconsumed();
    return rc;
}

}  // namespace lsmp
