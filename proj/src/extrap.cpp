#include "lsmp/extrap.hpp"

#include <cmath>
#include <stdexcept>

namespace lsmp {

std::vector<double> solve_dense(std::vector<std::vector<double>> M, std::vector<double> b) {
    const std::size_t n = M.size();
    if (n == 0 || b.size() != n) throw std::invalid_argument("solve_dense: bad dimensions");
    for (auto& row : M)
        if (row.size() != n) throw std::invalid_argument("solve_dense: bad dimensions");

    // Scale each row by its max entry, then eliminate with partial pivoting.
    for (std::size_t i = 0; i < n; ++i) {
        double scale = 0.0;
        for (double v : M[i]) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) throw std::runtime_error("solve_dense: singular matrix");
        for (double& v : M[i]) v /= scale;
        b[i] /= scale;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        if (std::abs(M[piv][col]) < 1e-300) throw std::runtime_error("solve_dense: singular matrix");
        std::swap(M[piv], M[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double m = M[r][col] / M[col][col];
            for (std::size_t c = col; c < n; ++c) M[r][c] -= m * M[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= M[i][c] * x[c];
        x[i] = s / M[i][i];
    }
    return x;
}

double power_law_limit(const std::vector<double>& eps, const std::vector<double>& f,
                       const std::vector<double>& exponents) {
    const std::size_t m = eps.size(), k = exponents.size() + 1;
    if (f.size() != m || m < k) throw std::invalid_argument("power_law_limit: need >= k+1 samples");
    for (double p : exponents)
        if (!(p > 0.0)) throw std::invalid_argument("power_law_limit: exponents must be positive");

    // Columns: [1, eps^{p_1}, ..., eps^{p_K}].  Normal equations are fine at
    // these sizes; rows are scaled inside solve_dense.
    std::vector<std::vector<double>> A(m, std::vector<double>(k));
    for (std::size_t i = 0; i < m; ++i) {
        A[i][0] = 1.0;
        for (std::size_t j = 1; j < k; ++j) A[i][j] = std::pow(eps[i], exponents[j - 1]);
    }
    std::vector<std::vector<double>> AtA(k, std::vector<double>(k, 0.0));
    std::vector<double> Atb(k, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < k; ++r) {
            Atb[r] += A[i][r] * f[i];
            for (std::size_t c = 0; c < k; ++c) AtA[r][c] += A[i][r] * A[i][c];
        }
    }
    return solve_dense(std::move(AtA), std::move(Atb))[0];
}

double fitted_rate(const std::vector<double>& eps, const std::vector<double>& f, double limit) {
    if (eps.size() != f.size() || eps.size() < 2)
        throw std::invalid_argument("fitted_rate: need >= 2 samples");
    // log|f - L| = log C + p log eps, least squares for p.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double d = std::abs(f[i] - limit);
        if (d == 0.0) continue;
        const double x = std::log(eps[i]), y = std::log(d);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw std::runtime_error("fitted_rate: samples coincide with limit");
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double fitted_difference_rate(const std::vector<double>& eps, const std::vector<double>& f) {
    if (eps.size() != f.size() || eps.size() < 3)
        throw std::invalid_argument("fitted_difference_rate: need >= 3 samples");
    std::vector<double> e2, d2;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const double d = std::abs(f[i + 1] - f[i]);
        if (d == 0.0) continue;
        e2.push_back(eps[i]);
        d2.push_back(d);
    }
    if (e2.size() < 2) throw std::runtime_error("fitted_difference_rate: differences vanish");
    // Reuse fitted_rate with limit 0 on the difference sequence.
    return fitted_rate(e2, d2, 0.0);
}

}  // namespace lsmp
