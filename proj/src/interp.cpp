#include "lsmp/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lsmp {

namespace {

// Fritsch-Carlson node slopes (the scheme scipy's PchipInterpolator uses).
// Interior slopes are weighted harmonic means of adjacent secants, zeroed at
// local extrema; endpoint slopes use the one-sided three-point formula with
// the usual monotonicity clamps.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& v) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n == 2) {
        d[0] = d[1] = (v[1] - v[0]) / (x[1] - x[0]);
        return d;
    }

    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        del[k] = (v[k + 1] - v[k]) / h[k];
    }

    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (del[k - 1] == 0.0 || del[k] == 0.0 || (del[k - 1] > 0.0) != (del[k] > 0.0)) {
            d[k] = 0.0;
        } else {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }

    auto edge = [](double h0, double h1, double del0, double del1) {
        double d0 = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
        if (d0 == 0.0 || del0 == 0.0 || (d0 > 0.0) != (del0 > 0.0)) {
            d0 = 0.0;
        } else if ((del0 > 0.0) != (del1 > 0.0) && std::abs(d0) > 3.0 * std::abs(del0)) {
            d0 = 3.0 * del0;
        }
        return d0;
    };
    d[0] = edge(h[0], h[1], del[0], del[1]);
    d[n - 1] = edge(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return d;
}

}  // namespace

Pchip::Pchip(std::vector<double> x, std::vector<double> v) : x_(std::move(x)), v_(std::move(v)) {
    if (x_.size() < 2 || x_.size() != v_.size())
        throw std::invalid_argument("Pchip: need >= 2 nodes and matching value count");
    for (std::size_t k = 0; k + 1 < x_.size(); ++k)
        if (!(x_[k] < x_[k + 1])) throw std::invalid_argument("Pchip: x must be strictly increasing");
    d_ = pchip_slopes(x_, v_);
}

std::size_t Pchip::locate(double xq) const {
    if (xq <= x_.front()) return 0;
    if (xq >= x_[x_.size() - 2]) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double Pchip::operator()(double xq) const {
    const std::size_t k = locate(xq);
    const double h = x_[k + 1] - x_[k];
    const double t = (xq - x_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * v_[k] + h * h10 * d_[k] + h01 * v_[k + 1] + h * h11 * d_[k + 1];
}

double Pchip::derivative(double xq) const {
    const std::size_t k = locate(xq);
    const double h = x_[k + 1] - x_[k];
    const double t = (xq - x_[k]) / h;
    const double t2 = t * t;
    const double dh00 = (6.0 * t2 - 6.0 * t) / h;
    const double dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    const double dh01 = (-6.0 * t2 + 6.0 * t) / h;
    const double dh11 = 3.0 * t2 - 2.0 * t;
    return dh00 * v_[k] + dh10 * d_[k] + dh01 * v_[k + 1] + dh11 * d_[k + 1];
}

}  // namespace lsmp
