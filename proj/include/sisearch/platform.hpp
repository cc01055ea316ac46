#pragma once

#include <string>
#include <vector>

#include "sisearch/distribution.hpp"
#include "sisearch/market.hpp"

namespace sisearch {

/// Platform-side view of the reasonable equilibrium at one token price.
struct PricePoint {
  double p = 0.0;
  bool ok = false;
  std::string error;
  double demand = 0.0;       ///< E[sigma q] per firm
  double revenue = 0.0;      ///< n p demand
  double sep_branch = 0.0;   ///< int psi q_sep f
  double pool_branch = 0.0;  ///< t_upper q_pool (1 - F(t_upper))
  double phi = 0.0;          ///< per-firm transfer from the welfare accounting
  double t_lower = 0.0;
  double t_upper = 1.0;
  bool pooling_active = false;
  double decomposition_residual = 0.0;  ///< |sep + pool - p demand|
  double transfer_demand_residual = 0.0;  ///< |phi - p demand|
};

/// Throws on inadmissible prices; p = 0 gives zero revenue.
PricePoint evaluate_price(double p, const MarketParams& base, const TypeDistribution& d);

double subsidy_demand(double p, const MarketParams& base, const TypeDistribution& d);

struct RevenueSplit {
  double sep_branch = 0.0;
  double pool_branch = 0.0;
};

RevenueSplit revenue_decomposition(double p, const MarketParams& base, const TypeDistribution& d);

struct PriceBracket {
  double lo = 1e-3;
  double hi = 1.0;
};

/// (1e-3, p_hi) with p_hi the price at which the participation cutoff reaches
/// 0.999 min(c / u, 1).
PriceBracket default_price_bracket(const MarketParams& base);

/// 0.5 for the uniform prior; bisection on the virtual value otherwise.
double virtual_value_root(const TypeDistribution& d);

/// Strictly increasing virtual value on `points` interior grid points.
bool virtual_value_regular(const TypeDistribution& d, std::size_t points = 200);

struct PlatformResult {
  std::vector<PricePoint> sweep;  ///< coarse grid
  double p_star = 0.0;
  double revenue_star = 0.0;
  double t_lower_star = 0.0;
  double t_upper_star = 1.0;
  bool pooling_at_star = false;
  double t_psi = 0.5;
  PriceBracket bracket;

  bool regular = true;              ///< virtual value strictly increasing on the check grid
  bool interior = false;            ///< p_star away from both bracket ends
  bool grid_optimal = false;        ///< R(p_star) >= R(p) at every sweep price
  bool excess_search = false;       ///< t_upper(p_star) < t_psi
  bool pool_branch_monotone = true; ///< nondecreasing in p where pooling is active
  double max_decomposition_residual = 0.0;
  double max_transfer_demand_residual = 0.0;
  std::vector<std::string> warnings;
};

PlatformResult optimize_price(const MarketParams& base, const TypeDistribution& d, const PriceBracket& bracket,
                              std::size_t coarse_grid = 100, unsigned workers = 0);

/// Coarse grid used by optimize_price: geometric when the bracket spans more
/// than two decades, uniform otherwise.
std::vector<double> price_grid(const PriceBracket& bracket, std::size_t points);

}  // namespace sisearch
