#pragma once

// Shape-preserving (monotone) cubic Hermite interpolation, Fritsch-Carlson
// flavor.  Chosen over plain cubic splines because the trajectories it carries
// (h and I) must respect hard bounds like h <= 1; a monotone interpolant never
// overshoots the data.

#include <cstddef>
#include <vector>

namespace lsmp {

class Pchip {
  public:
    Pchip() = default;

    // x must be strictly increasing and at least 2 points long.
    Pchip(std::vector<double> x, std::vector<double> v);

    double operator()(double xq) const;

    // Derivative of the interpolant (used only for diagnostics).
    double derivative(double xq) const;

    bool empty() const { return x_.empty(); }
    std::size_t size() const { return x_.size(); }
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

  private:
    std::size_t locate(double xq) const;

    std::vector<double> x_, v_, d_;  // nodes, values, node slopes
};

}  // namespace lsmp
