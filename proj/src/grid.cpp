#include "lsmp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lsmp {

void SolutionGrid::append(const AugmentedState& s) {
    if (!points_.empty() && !(s.y > points_.back().y))
        throw std::invalid_argument("SolutionGrid::append: y must increase strictly");
    points_.push_back(s);
    h_interp_.reset();
    I_interp_.reset();
}

void SolutionGrid::build_interp() const {
    if (h_interp_) return;
    if (points_.size() < 2) throw std::runtime_error("SolutionGrid: need >= 2 points");
    std::vector<double> y(points_.size()), h(points_.size()), I(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        y[i] = points_[i].y;
        h[i] = points_[i].h;
        I[i] = points_[i].I;
    }
    h_interp_.emplace(std::move(y), std::move(h));
    std::vector<double> y2(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) y2[i] = points_[i].y;
    I_interp_.emplace(std::move(y2), std::move(I));
}

double SolutionGrid::eval_h(double y) const {
    if (points_.empty()) throw std::runtime_error("SolutionGrid: empty");
    if (y < points_.front().y) return gamma_ + series_slope_ * y;
    build_interp();
    return (*h_interp_)(std::min(y, points_.back().y));
}

double SolutionGrid::eval_I(double y) const {
    if (points_.empty()) throw std::runtime_error("SolutionGrid: empty");
    if (y < points_.front().y) return (gamma_ - 1.0) * y;
    build_interp();
    return (*I_interp_)(std::min(y, points_.back().y));
}

double SolutionGrid::eval_exp_I(double y) const { return std::exp(eval_I(y)); }

double SolutionGrid::eval_h_prime(double y) const {
    if (points_.empty()) throw std::runtime_error("SolutionGrid: empty");
    if (y < points_.front().y) return series_slope_;
    build_interp();
    return h_interp_->derivative(std::min(y, points_.back().y));
}

double SolutionGrid::min_h() const {
    double m = points_.front().h;
    for (const auto& p : points_) m = std::min(m, p.h);
    return m;
}

double SolutionGrid::max_h() const {
    double m = points_.front().h;
    for (const auto& p : points_) m = std::max(m, p.h);
    return m;
}

void SolutionGrid::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("SolutionGrid::write_csv: cannot open " + path);
    std::fprintf(f, "y,h,I,exp_I\n");
    for (const auto& p : points_)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", p.y, p.h, p.I, std::exp(p.I));
    std::fclose(f);
}

}  // namespace lsmp
