#include "sisearch/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "sisearch/errors.hpp"
#include "sisearch/quadrature.hpp"

namespace sisearch {
namespace {

void check_unit(double t, const char* op) {
  if (!(t >= 0.0 && t <= 1.0))
    throw DomainError(std::string(op) + ": argument " + std::to_string(t) + " outside [0, 1]");
}

}  // namespace

TypeDistribution TypeDistribution::uniform() { return TypeDistribution{}; }

TypeDistribution TypeDistribution::beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw InvalidParams("beta prior needs positive finite shape parameters");
  TypeDistribution d;
  d.kind_ = Kind::beta;
  d.alpha_ = alpha;
  d.beta_ = beta;
  return d;
}

TypeDistribution TypeDistribution::piecewise(std::vector<Knot> knots) {
  if (knots.size() < 2) throw InvalidParams("piecewise prior needs at least two knots");
  if (knots.front() != Knot{0.0, 0.0} || knots.back() != Knot{1.0, 1.0})
    throw InvalidParams("piecewise prior must start at (0, 0) and end at (1, 1)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first))
      throw InvalidParams("piecewise knots must be strictly increasing in t");
    if (!(knots[i].second > knots[i - 1].second))
      throw InvalidParams("piecewise CDF must be strictly increasing (full support, no atoms)");
  }
  TypeDistribution d;
  d.kind_ = Kind::piecewise;
  d.knots_ = std::move(knots);
  return d;
}

TypeDistribution TypeDistribution::with_tolerance(double tolerance) const {
  if (!(tolerance > 0.0)) throw InvalidParams("quadrature tolerance must be positive");
  TypeDistribution copy = *this;
  copy.tolerance_ = tolerance;
  return copy;
}

std::string TypeDistribution::name() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::uniform:
      return "uniform";
    case Kind::beta:
      os << "beta(" << alpha_ << "," << beta_ << ")";
      return os.str();
    case Kind::piecewise:
      os << "piecewise(" << knots_.size() << " knots)";
      return os.str();
  }
  return "unknown";
}

std::size_t TypeDistribution::segment(double t) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double v, const Knot& k) { return v < k.first; });
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  return std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, knots_.size() - 2);
}

double TypeDistribution::cdf(double t) const {
  check_unit(t, "cdf");
  switch (kind_) {
    case Kind::uniform:
      return t;
    case Kind::beta:
      return boost::math::ibeta(alpha_, beta_, t);
    case Kind::piecewise: {
      const std::size_t i = segment(t);
      const auto [t0, f0] = knots_[i];
      const auto [t1, f1] = knots_[i + 1];
      return f0 + (f1 - f0) * (t - t0) / (t1 - t0);
    }
  }
  return 0.0;
}

double TypeDistribution::density(double t) const {
  check_unit(t, "density");
  switch (kind_) {
    case Kind::uniform:
      return 1.0;
    case Kind::beta:
      if ((t == 0.0 && alpha_ < 1.0) || (t == 1.0 && beta_ < 1.0)) return HUGE_VAL;
      return boost::math::pdf(boost::math::beta_distribution<double>(alpha_, beta_), t);
    case Kind::piecewise: {
      const std::size_t i = segment(t);
      return (knots_[i + 1].second - knots_[i].second) / (knots_[i + 1].first - knots_[i].first);
    }
  }
  return 0.0;
}

double TypeDistribution::partial_moment(double t) const {
  check_unit(t, "partial_moment");
  switch (kind_) {
    case Kind::uniform:
      return 0.5 * (1.0 - t * t);
    case Kind::beta: {
      const double m = alpha_ / (alpha_ + beta_);
      return m * boost::math::ibetac(alpha_ + 1.0, beta_, t);
    }
    case Kind::piecewise: {
      // x times a constant slope is linear, so one Gauss-Legendre panel per segment is exact.
      double total = 0.0;
      for (std::size_t i = segment(t); i + 1 < knots_.size(); ++i) {
        const double lo = std::max(t, knots_[i].first);
        const double hi = knots_[i + 1].first;
        if (hi <= lo) continue;
        const double slope = (knots_[i + 1].second - knots_[i].second) / (hi - knots_[i].first);
        total += integrate([slope](double x) { return x * slope; }, lo, hi, 1);
      }
      return total;
    }
  }
  return 0.0;
}

double TypeDistribution::partial_moment_quadrature(double t) const {
  check_unit(t, "partial_moment");
  const auto breaks = breakpoints();
  std::size_t panels = 64;
  // A beta density with a shape parameter below 1 is unbounded at that edge.
  // Integrate the bounded quantile over probability instead, with panels
  // graded toward both ends of [F(t), 1].
  if (kind_ == Kind::beta && (alpha_ < 1.0 || beta_ < 1.0)) {
    std::vector<double> graded;
    for (int k = 1; k <= 52; ++k) {
      graded.push_back(std::ldexp(1.0, -k));
      graded.push_back(1.0 - std::ldexp(1.0, -k));
    }
    return integrate_with_breaks([this](double v) { return quantile(v); }, cdf(t), 1.0, graded, 4);
  }
  return integrate_with_breaks([this](double x) { return x * density(x); }, t, 1.0, breaks, panels);
}

double TypeDistribution::truncated_mean(double t) const {
  check_unit(t, "truncated_mean");
  const double tail = 1.0 - cdf(t);
  if (tail < kTruncationFloor)
    throw DegenerateTruncation("truncated_mean: prior mass above " + std::to_string(t) + " is below the floor");
  return std::clamp(partial_moment(t) / tail, t, 1.0);
}

double TypeDistribution::quantile(double prob) const {
  check_unit(prob, "quantile");
  switch (kind_) {
    case Kind::uniform:
      return prob;
    case Kind::beta:
      try {
        return boost::math::ibeta_inv(alpha_, beta_, prob);
      } catch (const boost::math::evaluation_error&) {
        // Far in the lower tail with a shape below 1 the library's iteration
        // gives up; bisect the CDF in log t instead.
        double lo = std::log(std::numeric_limits<double>::min());
        double hi = 0.0;
        for (int i = 0; i < 200 && hi - lo > 1e-15 * std::abs(lo); ++i) {
          const double mid = 0.5 * (lo + hi);
          (boost::math::ibeta(alpha_, beta_, std::exp(mid)) < prob ? lo : hi) = mid;
        }
        return std::exp(0.5 * (lo + hi));
      }
    case Kind::piecewise: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), prob,
                                 [](double v, const Knot& k) { return v < k.second; });
      std::size_t i = static_cast<std::size_t>(it - knots_.begin());
      i = std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, knots_.size() - 2);
      const auto [t0, f0] = knots_[i];
      const auto [t1, f1] = knots_[i + 1];
      return t0 + (t1 - t0) * (prob - f0) / (f1 - f0);
    }
  }
  return 0.0;
}

double TypeDistribution::virtual_value(double t) const {
  return t - (1.0 - cdf(t)) / std::max(density(t), kDensityFloor);
}

std::vector<double> TypeDistribution::breakpoints() const {
  std::vector<double> out;
  if (kind_ == Kind::piecewise)
    for (std::size_t i = 1; i + 1 < knots_.size(); ++i) out.push_back(knots_[i].first);
  return out;
}

}  // namespace sisearch
