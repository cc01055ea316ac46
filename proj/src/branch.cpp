#include "sisearch/branch.hpp"

#include <algorithm>
#include <cmath>

#include "sisearch/attention.hpp"
#include "sisearch/errors.hpp"
#include "sisearch/kernels.hpp"

namespace sisearch {

SeparatingBranch::SeparatingBranch(double t0, const MarketParams& params, const TypeDistribution& d,
                                   std::size_t panels)
    : t0_(t0), params_(params), dist_(d) {
  if (!(t0 >= 0.0 && t0 <= 1.0)) throw DomainError("separating branch: t0 outside [0, 1]");
  if (t0 >= 1.0) return;
  panels = std::max<std::size_t>(panels, 1);

  std::vector<double> edges;
  edges.reserve(panels + 8);
  const double h = (1.0 - t0) / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) edges.push_back(t0 + h * static_cast<double>(k));
  edges.push_back(1.0);
  for (double b : d.breakpoints())
    if (b > t0 && b < 1.0) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  panels_.reserve(edges.size() - 1);
  double base = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    panels_.push_back(build_panel(edges[k], edges[k + 1], base));
    const auto& pn = panels_.back();
    base += kernels::dot(pn.w, pn.q);
  }
}

PanelSample SeparatingBranch::build_panel(double lo, double hi, double base) const {
  PanelSample pn;
  pn.lo = lo;
  pn.hi = hi;
  pn.base = base;
  const MappedRule rule = map_rule(lo, hi);
  pn.t = rule.nodes;
  pn.w = rule.weights;
  q_sep_batch(pn.t, t0_, params_, dist_, pn.q);
  kernels::matvec(gauss_legendre().running, pn.q, pn.cum);
  const double half = 0.5 * (hi - lo);
  for (double& v : pn.cum) v = base + half * v;
  return pn;
}

std::size_t SeparatingBranch::panel_index(double t) const {
  auto it = std::upper_bound(panels_.begin(), panels_.end(), t,
                             [](double v, const PanelSample& pn) { return v < pn.lo; });
  const std::size_t i = static_cast<std::size_t>(it - panels_.begin());
  return i == 0 ? 0 : std::min(i - 1, panels_.size() - 1);
}

double SeparatingBranch::attention(double t) const { return q_sep(t, t0_, params_, dist_); }

double SeparatingBranch::cumulative(double t) const {
  if (t <= t0_ || panels_.empty()) return 0.0;
  t = std::min(t, 1.0);
  const PanelSample& pn = panels_[panel_index(t)];
  if (t == pn.hi) return pn.base + kernels::dot(pn.w, pn.q);
  const MappedRule rule = map_rule(pn.lo, t);
  std::array<double, kGaussOrder> q{};
  q_sep_batch(rule.nodes, t0_, params_, dist_, q);
  return pn.base + kernels::dot(rule.weights, q);
}

double SeparatingBranch::attention_slope(double t) const {
  if (t < t0_ || params_.n == 1) return 0.0;
  const double base = 1.0 - dist_.partial_moment(t);
  return (params_.n - 1) * std::pow(base, params_.n - 2) * t * dist_.density(t);
}

double SeparatingBranch::subsidy_slope(double t, double sigma) const {
  const double p = params_.p;
  return attention_slope(t) * (t - p * sigma) / (p * attention(t));
}

double SeparatingBranch::subsidy(double t) const {
  if (!(params_.p > 0.0)) throw PriceZeroError("separating subsidy is undefined at p = 0");
  if (t < t0_) throw DomainError("separating subsidy below the lower cutoff");
  const double p = params_.p;
  return t / p - cumulative(t) / (p * attention(t));
}

std::vector<PanelSample> SeparatingBranch::samples(double upper) const {
  std::vector<PanelSample> out;
  upper = std::min(upper, 1.0);
  if (upper <= t0_) return out;
  for (const PanelSample& pn : panels_) {
    if (pn.lo >= upper) break;
    if (pn.hi <= upper) {
      out.push_back(pn);
    } else {
      out.push_back(build_panel(pn.lo, upper, pn.base));
      break;
    }
  }
  return out;
}

}  // namespace sisearch
