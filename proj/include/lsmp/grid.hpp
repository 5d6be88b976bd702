#pragma once

// Accepted-step trajectory of the augmented ODE plus interpolation helpers.
// Below the first node the solution is extended with its startup series
// h = gamma + s1*y, I = (gamma-1)*y, which is what seeded the integration;
// everything else is shape-preserving cubic (PCHIP) through the nodes.

#include <optional>
#include <string>
#include <vector>

#include "lsmp/interp.hpp"
#include "lsmp/types.hpp"

namespace lsmp {

class SolutionGrid {
  public:
    SolutionGrid(double gamma, double series_slope, double start_offset, double end_offset,
                 std::optional<ModelParams> params = std::nullopt)
        : gamma_(gamma),
          series_slope_(series_slope),
          start_offset_(start_offset),
          end_offset_(end_offset),
          params_(std::move(params)) {}

    // Append an accepted step; y must increase strictly.
    void append(const AugmentedState& s);

    const std::vector<AugmentedState>& points() const { return points_; }
    const std::optional<ModelParams>& params() const { return params_; }
    double gamma() const { return gamma_; }
    double series_slope() const { return series_slope_; }
    double start_offset() const { return start_offset_; }
    double end_offset() const { return end_offset_; }

    double y_front() const { return points_.front().y; }
    double y_back() const { return points_.back().y; }
    std::size_t size() const { return points_.size(); }

    // Interpolated evaluation; series extension for y below the first node.
    double eval_h(double y) const;
    double eval_I(double y) const;
    double eval_exp_I(double y) const;
    // PCHIP derivative of h (diagnostics only; not used in certified limits).
    double eval_h_prime(double y) const;

    double min_h() const;
    double max_h() const;

    // CSV columns: y,h,I,exp_I with 17 significant digits.
    void write_csv(const std::string& path) const;

  private:
    void build_interp() const;

    double gamma_;
    double series_slope_;
    double start_offset_;
    double end_offset_;
    std::optional<ModelParams> params_;
    std::vector<AugmentedState> points_;
    mutable std::optional<Pchip> h_interp_;
    mutable std::optional<Pchip> I_interp_;
};

}  // namespace lsmp
