#pragma once

// Endpoint extrapolation.  Quantities of interest behave like
//   f(eps) = L + c_1 eps^{p_1} + c_2 eps^{p_2} + ...
// as eps -> 0 with known exponents p_k (they come from the local analysis of
// the ODE at the endpoint).  Sampling f at a few offsets and solving the
// small linear system for L removes the leading corrections.

#include <vector>

namespace lsmp {

// Least-squares fit of samples (eps_i, f_i) to L + sum_k c_k eps^{p_k};
// returns L.  Requires eps.size() == f.size() >= exponents.size() + 1 and
// all exponents positive.
double power_law_limit(const std::vector<double>& eps, const std::vector<double>& f,
                       const std::vector<double>& exponents);

// Fit |f(eps) - L| ~ C eps^p by log-log regression against a known limit L;
// returns the estimated rate p.  Used to certify convergence rates.
double fitted_rate(const std::vector<double>& eps, const std::vector<double>& f, double limit);

// Fit successive differences |f_{i+1} - f_i| ~ C eps_i^p (no limit needed).
double fitted_difference_rate(const std::vector<double>& eps, const std::vector<double>& f);

// Solve the square system M x = b by Gaussian elimination with partial
// pivoting and row scaling.  Dimensions here are tiny (<= 6).
std::vector<double> solve_dense(std::vector<std::vector<double>> M, std::vector<double> b);

}  // namespace lsmp
