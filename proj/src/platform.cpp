#include "sisearch/platform.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "sisearch/equilibrium.hpp"
#include "sisearch/errors.hpp"
#include "sisearch/numerics.hpp"
#include "sisearch/parallel.hpp"
#include "sisearch/welfare.hpp"

namespace sisearch {

PricePoint evaluate_price(double p, const MarketParams& base, const TypeDistribution& d) {
  const MarketParams params = base.with_price(p);
  params.validate();
  PricePoint pt;
  pt.p = p;
  const EquilibriumSolution sol = solve_reasonable_equilibrium(params, d);
  const WelfareReport w = welfare_report(sol);
  const TransferSplit split = virtual_value_transfer(sol);
  pt.demand = w.demand;
  pt.revenue = params.n * p * w.demand;
  pt.phi = w.phi;
  pt.sep_branch = split.separating;
  pt.pool_branch = split.pooling;
  pt.t_lower = sol.t_lower;
  pt.t_upper = sol.t_upper;
  pt.pooling_active = sol.pooling_active;
  if (p > 0.0) {
    pt.decomposition_residual = std::abs(pt.sep_branch + pt.pool_branch - p * pt.demand);
    pt.transfer_demand_residual = std::abs(pt.phi - p * pt.demand);
  } else {
    // Nobody pays at a zero price; the virtual-value split does not apply.
    pt.sep_branch = pt.pool_branch = 0.0;
  }
  pt.ok = true;
  return pt;
}

double subsidy_demand(double p, const MarketParams& base, const TypeDistribution& d) {
  return evaluate_price(p, base, d).demand;
}

RevenueSplit revenue_decomposition(double p, const MarketParams& base, const TypeDistribution& d) {
  const PricePoint pt = evaluate_price(p, base, d);
  return {pt.sep_branch, pt.pool_branch};
}

PriceBracket default_price_bracket(const MarketParams& base) {
  const double target = 0.999 * std::min(base.c / base.u, 1.0);
  return {1e-3, target / (base.c - base.u * target)};
}

double virtual_value_root(const TypeDistribution& d) {
  if (d.kind() == TypeDistribution::Kind::uniform) return 0.5;
  return bisect([&](double t) { return d.virtual_value(t); }, 1e-9, 1.0 - 1e-9, 1e-12, "virtual value root");
}

bool virtual_value_regular(const TypeDistribution& d, std::size_t points) {
  double prev = -HUGE_VAL;
  for (std::size_t i = 1; i <= points; ++i) {
    const double psi = d.virtual_value(static_cast<double>(i) / static_cast<double>(points + 1));
    if (!(psi > prev)) return false;
    prev = psi;
  }
  return true;
}

std::vector<double> price_grid(const PriceBracket& bracket, std::size_t points) {
  points = std::max<std::size_t>(points, 2);
  std::vector<double> grid(points);
  const bool geometric = bracket.hi / bracket.lo > 100.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = geometric ? bracket.lo * std::pow(bracket.hi / bracket.lo, x) : bracket.lo + (bracket.hi - bracket.lo) * x;
  }
  grid.back() = bracket.hi;
  return grid;
}

PlatformResult optimize_price(const MarketParams& base, const TypeDistribution& d, const PriceBracket& bracket,
                              std::size_t coarse_grid, unsigned workers) {
  if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo)) throw InvalidParams("price bracket needs 0 < lo < hi");
  base.with_price(bracket.hi).validate();

  PlatformResult res;
  res.bracket = bracket;
  res.regular = virtual_value_regular(d);
  if (!res.regular) res.warnings.push_back("virtual value is not strictly increasing; the optimum may not be unique");
  try {
    res.t_psi = virtual_value_root(d);
  } catch (const Error& e) {
    res.warnings.push_back(std::string("virtual value root: ") + e.what());
    res.t_psi = std::nan("");
  }

  const std::vector<double> grid = price_grid(bracket, coarse_grid);
  res.sweep.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    try {
      res.sweep[i] = evaluate_price(grid[i], base, d);
    } catch (const std::exception& e) {
      res.sweep[i].p = grid[i];
      res.sweep[i].error = e.what();
    }
  });

  std::size_t best = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const PricePoint& pt = res.sweep[i];
    if (!pt.ok) {
      res.warnings.push_back("price " + std::to_string(pt.p) + ": " + pt.error);
      continue;
    }
    res.max_decomposition_residual = std::max(res.max_decomposition_residual, pt.decomposition_residual);
    res.max_transfer_demand_residual = std::max(res.max_transfer_demand_residual, pt.transfer_demand_residual);
    if (best == grid.size() || pt.revenue > res.sweep[best].revenue) best = i;
  }
  if (best == grid.size()) throw BracketFailure("no admissible price on the coarse grid");

  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];
  const auto refined = golden_section_max(
      [&](double p) {
        try {
          return evaluate_price(p, base, d).revenue;
        } catch (const Error&) {
          return -HUGE_VAL;
        }
      },
      a, b, 1e-6);
  PricePoint star = res.sweep[best];
  if (refined.value > star.revenue) star = evaluate_price(refined.x, base, d);

  res.p_star = star.p;
  res.revenue_star = star.revenue;
  res.t_lower_star = star.t_lower;
  res.t_upper_star = star.t_upper;
  res.pooling_at_star = star.pooling_active;

  res.interior = res.p_star > bracket.lo * (1.0 + 1e-3) && res.p_star < bracket.hi * (1.0 - 1e-3);
  res.grid_optimal = std::all_of(res.sweep.begin(), res.sweep.end(),
                                 [&](const PricePoint& pt) { return !pt.ok || res.revenue_star >= pt.revenue; });
  res.excess_search = res.t_upper_star < res.t_psi;

  double prev_pool = -HUGE_VAL;
  for (const PricePoint& pt : res.sweep) {
    if (!pt.ok || !pt.pooling_active) continue;
    if (pt.pool_branch < prev_pool) res.pool_branch_monotone = false;
    prev_pool = pt.pool_branch;
  }
  if (!res.pool_branch_monotone) res.warnings.push_back("pooling branch value decreases somewhere along the sweep");
  return res;
}

}  // namespace sisearch
