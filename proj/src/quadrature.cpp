#include "sisearch/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace sisearch {
namespace {

// P_0..P_order at x by the three-term recurrence.
std::array<double, kGaussOrder + 2> legendre_values(double x) {
  std::array<double, kGaussOrder + 2> p{};
  p[0] = 1.0;
  p[1] = x;
  for (std::size_t m = 1; m + 1 < p.size(); ++m)
    p[m + 1] = ((2.0 * m + 1.0) * x * p[m] - static_cast<double>(m) * p[m - 1]) / (m + 1.0);
  return p;
}

GaussLegendreRule build_rule() {
  constexpr std::size_t n = kGaussOrder;
  GaussLegendreRule rule;
  for (std::size_t i = 0; i < n; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto p = legendre_values(x);
      dp = n * (x * p[n] - p[n - 1]) / (x * x - 1.0);
      const double dx = p[n] / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto p = legendre_values(x);
    dp = n * (x * p[n] - p[n - 1]) / (x * x - 1.0);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }

  // Lagrange basis in Legendre form, l_j = w_j sum_m (2m+1)/2 P_m(x_j) P_m, then
  // integrate each P_m from -1 to x_k in closed form.
  std::vector<std::array<double, n + 2>> at_node(n);
  for (std::size_t i = 0; i < n; ++i) at_node[i] = legendre_values(rule.nodes[i]);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& pk = at_node[k];
    for (std::size_t j = 0; j < n; ++j) {
      const auto& pj = at_node[j];
      double s = 0.5 * (rule.nodes[k] + 1.0);
      for (std::size_t m = 1; m < n; ++m) s += 0.5 * pj[m] * (pk[m + 1] - pk[m - 1]);
      rule.running[k * n + j] = rule.weights[j] * s;
    }
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre() {
  static const GaussLegendreRule rule = build_rule();
  return rule;
}

MappedRule map_rule(double lo, double hi) {
  const auto& base = gauss_legendre();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  MappedRule out;
  for (std::size_t i = 0; i < kGaussOrder; ++i) {
    out.nodes[i] = std::clamp(mid + half * base.nodes[i], lo, hi);
    out.weights[i] = half * base.weights[i];
  }
  return out;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, std::size_t panels) {
  if (!(hi > lo)) return 0.0;
  panels = std::max<std::size_t>(panels, 1);
  const double h = (hi - lo) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = lo + h * static_cast<double>(k);
    const double b = k + 1 == panels ? hi : a + h;
    const MappedRule r = map_rule(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < kGaussOrder; ++i) s += r.weights[i] * f(r.nodes[i]);
    total += s;
  }
  return total;
}

double integrate_with_breaks(const std::function<double(double)>& f, double lo, double hi,
                             std::span<const double> breaks, std::size_t panels) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> edges{lo};
  for (double b : breaks)
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) total += integrate(f, edges[i], edges[i + 1], panels);
  return total;
}

}  // namespace sisearch
