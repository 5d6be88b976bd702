#pragma once

// Plain-text run configuration: INI-style sections of key = value lines.
//
// The parser keeps the source line of every entry so that errors raised long
// after parsing (bad number, out-of-range value, unknown key) still point at
// the offending line.  Typed getters mark entries as consumed; after a mode
// handler has pulled everything it understands, reject_unconsumed() turns any
// leftover key into an error.  This is how "unknown keys rejected" works
// without a central schema: each mode consumes exactly the blocks it
// references.
//
// Grammar, intentionally small:
//   [section]            header; keys before any header are an error
//   key = value          value is everything after '=', trimmed
//   # comment            full-line comments only ('#' or ';' first)
//   blank lines ignored
// Duplicate keys within a section are an error (silent last-wins hides
// typos).  Overrides from --set section.key=value replace or add entries and
// report as "<override>" in messages.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lsmp/equilibrium.hpp"
#include "lsmp/simulate.hpp"
#include "lsmp/types.hpp"

namespace lsmp {

class Config {
  public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& name);

    // "section.key=value" (the --set argument format).  Throws on a spec
    // without '.' before the first '=' or with an empty key.
    void apply_override(const std::string& spec);

    bool has(const std::string& section, const std::string& key) const;

    // Getters without a fallback throw if the key is absent; the fallback
    // variants consume the key when present and return the fallback when not.
    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    // Comma- and/or whitespace-separated doubles, at least one required.
    std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

    // Throws listing every entry no getter has touched, with its source line.
    void reject_unconsumed() const;

    const std::string& name() const { return name_; }

  private:
    struct Entry {
        std::string value;
        int line = 0;  // 0 for --set overrides
        mutable bool consumed = false;
    };

    const Entry* find(const std::string& section, const std::string& key) const;
    const Entry& require(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail(const Entry& e, const std::string& section, const std::string& key,
                           const std::string& what) const;
    std::string location(const Entry& e) const;

    std::string name_ = "<empty>";
    std::map<std::string, std::map<std::string, Entry>> sections_;
};

// Everything a mode handler needs, assembled from a Config with defaults
// filled in.  Which blocks are read depends on the mode:
//
//   solve-ode      [model] gamma sigma_D A xi      [integrator]
//   find-critical  [model] gamma sigma_D A         [integrator] (+ xi_tol)
//   equilibrium    [model] + [economy]             [integrator]
//   simulate       [model] + [economy] + [integrator] + [simulation]
//   sweep          [model] gamma sigma_D A         [integrator] + [sweep] xi
//
// [model] A may be omitted when [economy] is present (A is then derived from
// beta, mu_D, sigma_D, gamma); if both are given they must agree to 1e-12.
// [economy] supplies beta, mu_D, D0 and shares gamma/sigma_D with [model].
// verify-all takes no configuration (its parameters are pinned) and is
// assembled elsewhere.
struct RunConfig {
    std::string mode;
    double gamma = 0.5;
    double sigma_D = 0.2;
    double A = 2.0;
    double xi = 0.0;  // solve-ode only
    std::optional<EconomyParams> economy;
    IntegratorConfig integrator;
    double xi_tol = 1e-12;
    SimConfig sim;
    double Y0 = 0.5;
    std::vector<double> sweep_xi;
    std::string out_dir;
};

// Pulls the blocks for `mode` out of `cfg`, validates ranges, rejects
// leftovers.  `out_dir` resolution: [output] dir if present, else the
// LSMP_OUT_DIR environment variable, else "out" (the --out flag is applied
// upstream as an override of output.dir, so it naturally wins).
RunConfig assemble_run_config(const Config& cfg, const std::string& mode);

}  // namespace lsmp
