#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sisearch {

/// Prior over firm types on [0, 1]. Immutable after construction.
class TypeDistribution {
 public:
  enum class Kind { uniform, beta, piecewise };

  using Knot = std::pair<double, double>;  // (t, F(t))

  /// The uniform prior.
  TypeDistribution() = default;

  static TypeDistribution uniform();
  static TypeDistribution beta(double alpha, double beta);
  /// Knots must run from (0, 0) to (1, 1) strictly increasing in both coordinates
  /// (a flat piece would leave a gap in the support).
  static TypeDistribution piecewise(std::vector<Knot> knots);

  TypeDistribution with_tolerance(double tolerance) const;

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta_param() const { return beta_; }
  const std::vector<Knot>& knots() const { return knots_; }
  double quadrature_tolerance() const { return tolerance_; }
  std::string name() const;

  double cdf(double t) const;
  /// Right-continuous density; on a piecewise prior the slope of the segment starting at t.
  double density(double t) const;
  /// Integral of x dF(x) over [t, 1].
  double partial_moment(double t) const;
  /// Same integral by Gauss-Legendre on x f(x), independent of the closed form.
  double partial_moment_quadrature(double t) const;
  /// E[type | type >= t].
  double truncated_mean(double t) const;
  double mean() const { return partial_moment(0.0); }
  double quantile(double prob) const;
  /// t - (1 - F(t)) / f(t), with f floored.
  double virtual_value(double t) const;
  /// Interior points where the density is not smooth.
  std::vector<double> breakpoints() const;

  static constexpr double kTruncationFloor = 1e-12;
  static constexpr double kDensityFloor = 1e-12;

 private:
  std::size_t segment(double t) const;

  Kind kind_ = Kind::uniform;
  double alpha_ = 1.0;
  double beta_ = 1.0;
  std::vector<Knot> knots_;
  double tolerance_ = 1e-10;
};

}  // namespace sisearch
