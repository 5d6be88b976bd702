#pragma once

// The acceptance battery: twelve numbered end-to-end checks covering the
// critical parameter, the terminal identities, the constant-coefficient
// oracle family, ordering/explosion phenomenology, the Monte Carlo
// estimators, the g suite, and the boundary/appendix diagnostics.  Each check
// is self-contained (no hidden state between criteria beyond the shared
// critical solutions, which are computed once) and returns a one-line
// verdict; the battery is what `verify-all` and the acceptance test run.
//
// Two checks knowingly depart from a literal reading of their source:
//   * #1 pins BOTH readings of the published critical value: the stated
//     parameter set (A=2) must give 0.122318684533, and A=2.5 must land in
//     the published window [0.152231, 0.152233] — the two agree only if the
//     figure caption's "A:=2" is read as A=2.5, which every cross-identity
//     supports (see the shooting tests).
//   * #11's raw eps pair {1e-4, 1e-5} differs by ~1e-2 relative because the
//     tail is Theta(eps^gamma); the 1e-6 Cauchy requirement is met by the
//     eps^gamma-extrapolated limits, and the raw change is reported.

#include <cstdint>
#include <string>
#include <vector>

namespace lsmp {

struct CriterionResult {
    int id = 0;
    std::string label;
    bool pass = false;
    std::string detail;   // measured numbers, one line
    double seconds = 0.0;
};

// Runs criteria 1..12 in order (9 dominates the runtime: a 10^5-path
// Richardson pair over horizon 400 takes a few minutes single-core).
// `quick` skips the two expensive Monte Carlo criteria (8, 9) by marking
// them as skipped-but-passing with a note; the acceptance gate runs full.
std::vector<CriterionResult> run_acceptance(bool quick = false);

// "ok N - label: detail (T s)" per line, plus a summary line; returns the
// number of failures.
int print_acceptance(const std::vector<CriterionResult>& results);

}  // namespace lsmp
