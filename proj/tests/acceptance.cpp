// Acceptance battery: one pass/fail line per criterion, non-zero exit on any
// failure.  The same battery backs the CLI's `verify-all`.

#include <vector>

#include "lsmp/verify.hpp"

int main() {
    const std::vector<lsmp::CriterionResult> results = lsmp::run_acceptance(false);
    const int failures = lsmp::print_acceptance(results);
    return failures == 0 ? 0 : 1;
}
