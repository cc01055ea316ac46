#pragma once

#include <cstddef>
#include <vector>

namespace sisearch {

class SeparatingBranch;

/// Step / increasing / step subsidy policy: zero below t0, a separating branch on
/// [t0, t1), and the cap c from t1 up when pooling is active.
class SubsidySchedule {
 public:
  static constexpr std::size_t kGridPoints = 2048;

  /// Nobody subsidizes.
  SubsidySchedule() = default;

  /// Separating branch sampled on kGridPoints uniform points of [t0, t1].
  static SubsidySchedule separating(const SeparatingBranch& branch, double t1, bool pooling, double cap,
                                    std::size_t grid_points = kGridPoints);
  /// Every type from t0 up pools at the cap.
  static SubsidySchedule full_pool(double t0, double cap);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  double cap() const { return cap_; }
  bool pooling() const { return pooling_; }
  bool has_separating_branch() const { return !grid_t_.empty(); }

  /// sigma(t) on all of [0, 1].
  double operator()(double t) const;
  /// Interpolated separating branch on [t0, t1] (the left limit at t1).
  double separating_value(double t) const;
  /// Type on the separating branch offering subsidy s, by bisection on the
  /// interpolant; s is clamped into the branch range.
  double inverse(double s) const;

  const std::vector<double>& grid_t() const { return grid_t_; }
  const std::vector<double>& grid_sigma() const { return grid_s_; }

 private:
  void limit_slopes();

  double t0_ = 0.0;
  double t1_ = 1.0;
  double cap_ = 0.0;
  bool pooling_ = false;
  std::vector<double> grid_t_;
  std::vector<double> grid_s_;
  std::vector<double> slope_;
};

}  // namespace sisearch
