#include "sisearch/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "sisearch/branch.hpp"
#include "sisearch/errors.hpp"

namespace sisearch {

SubsidySchedule SubsidySchedule::separating(const SeparatingBranch& branch, double t1, bool pooling, double cap,
                                            std::size_t grid_points) {
  SubsidySchedule s;
  s.t0_ = branch.t0();
  s.t1_ = t1;
  s.cap_ = cap;
  s.pooling_ = pooling;
  if (!(t1 > s.t0_)) throw DomainError("separating schedule needs t1 > t0");
  grid_points = std::max<std::size_t>(grid_points, 2);
  s.grid_t_.resize(grid_points);
  s.grid_s_.resize(grid_points);
  const double h = (t1 - s.t0_) / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = i + 1 == grid_points ? t1 : s.t0_ + h * static_cast<double>(i);
    s.grid_t_[i] = t;
    s.grid_s_[i] = branch.subsidy(t);
  }
  s.grid_s_[0] = s.t0_ / branch.params().p;
  s.slope_.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) s.slope_[i] = branch.subsidy_slope(s.grid_t_[i], s.grid_s_[i]);
  s.limit_slopes();
  return s;
}

SubsidySchedule SubsidySchedule::full_pool(double t0, double cap) {
  SubsidySchedule s;
  s.t0_ = t0;
  s.t1_ = t0;
  s.cap_ = cap;
  s.pooling_ = true;
  return s;
}

// Exact derivatives make the Hermite interpolant fourth-order accurate; the
// Fritsch-Carlson limiter only intervenes where they would break monotonicity.
void SubsidySchedule::limit_slopes() {
  for (std::size_t i = 0; i + 1 < grid_t_.size(); ++i) {
    const double delta = (grid_s_[i + 1] - grid_s_[i]) / (grid_t_[i + 1] - grid_t_[i]);
    if (delta <= 0.0) {
      slope_[i] = 0.0;
      slope_[i + 1] = 0.0;
      continue;
    }
    slope_[i] = std::max(slope_[i], 0.0);
    slope_[i + 1] = std::max(slope_[i + 1], 0.0);
    const double a = slope_[i] / delta;
    const double b = slope_[i + 1] / delta;
    const double r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double scale = 3.0 / std::sqrt(r2);
      slope_[i] = scale * a * delta;
      slope_[i + 1] = scale * b * delta;
    }
  }
}

double SubsidySchedule::separating_value(double t) const {
  if (grid_t_.empty()) return cap_;
  if (t <= grid_t_.front()) return grid_s_.front();
  if (t >= grid_t_.back()) return grid_s_.back();
  auto it = std::upper_bound(grid_t_.begin(), grid_t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - grid_t_.begin()) - 1;
  const double h = grid_t_[i + 1] - grid_t_[i];
  const double x = (t - grid_t_[i]) / h;
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
  const double h10 = x3 - 2.0 * x2 + x;
  const double h01 = -2.0 * x3 + 3.0 * x2;
  const double h11 = x3 - x2;
  return h00 * grid_s_[i] + h10 * h * slope_[i] + h01 * grid_s_[i + 1] + h11 * h * slope_[i + 1];
}

double SubsidySchedule::operator()(double t) const {
  if (t < t0_) return 0.0;
  if (pooling_ && t >= t1_) return cap_;
  return separating_value(t);
}

double SubsidySchedule::inverse(double s) const {
  if (grid_t_.empty()) return t0_;
  if (s <= grid_s_.front()) return grid_t_.front();
  if (s >= grid_s_.back()) return grid_t_.back();
  auto it = std::upper_bound(grid_s_.begin(), grid_s_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - grid_s_.begin()) - 1;
  double lo = grid_t_[i];
  double hi = grid_t_[i + 1];
  for (int k = 0; k < 80 && hi - lo > 1e-15; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (separating_value(mid) < s)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sisearch
