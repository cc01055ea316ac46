#include <doctest.h>

#include <cmath>

#include "sisearch/errors.hpp"
#include "sisearch/platform.hpp"
#include "sisearch/welfare.hpp"

using namespace sisearch;

namespace {

MarketParams market(double c = 0.5) {
  MarketParams m;
  m.c = c;
  return m;
}

}  // namespace

TEST_SUITE("platform") {

TEST_CASE("virtual value root and regularity") {
  CHECK(virtual_value_root(TypeDistribution()) == 0.5);
  // Root of t - (1 - 3t^2 + 2t^3) / (6t(1 - t)) by an independent Brent solve.
  CHECK(virtual_value_root(TypeDistribution::beta(2, 2)) == doctest::Approx(0.4215351654086269).epsilon(1e-10));
  CHECK(virtual_value_regular(TypeDistribution()));
  CHECK(virtual_value_regular(TypeDistribution::beta(2, 2)));
  // Density falling from 1.8 to 0.2 at 0.5 makes the virtual value drop there.
  CHECK_FALSE(virtual_value_regular(TypeDistribution::piecewise({{0, 0}, {0.5, 0.9}, {1, 1}})));
}

TEST_CASE("demand matches the welfare transfer") {
  const TypeDistribution u;
  const PricePoint pt = evaluate_price(1.0, market(), u);
  const auto w = welfare_report(solve_reasonable_equilibrium(market(), u));
  CHECK(pt.demand == doctest::Approx(w.phi).epsilon(1e-12));
  CHECK(pt.revenue == doctest::Approx(10 * w.phi).epsilon(1e-12));
  CHECK(pt.decomposition_residual <= 1e-6);
  CHECK(subsidy_demand(1.0, market(), u) == pt.demand);
}

TEST_CASE("revenue split") {
  const TypeDistribution u;
  const auto high = revenue_decomposition(1.8, market(), u);
  CHECK(high.pool_branch == 0.0);
  const PricePoint pt = evaluate_price(1.8, market(), u);
  CHECK(std::abs(high.sep_branch - 1.8 * pt.demand) <= 1e-6);
  // Nearly free subsidies: almost every participant pools, the separating part vanishes.
  const auto cheap = revenue_decomposition(1e-4, market(), u);
  CHECK(std::abs(cheap.sep_branch) < 1e-8);
}

TEST_CASE("zero price and vanishing participation") {
  const TypeDistribution u;
  CHECK(evaluate_price(0.0, market(), u).revenue == 0.0);
  // With c = 1.5 the participation cutoff reaches 1 as p approaches 2.
  CHECK(evaluate_price(1.0, market(1.5), u).demand > evaluate_price(1.99, market(1.5), u).demand);
  CHECK(evaluate_price(1.99, market(1.5), u).demand < 1e-3);
  CHECK_THROWS_AS(evaluate_price(2.5, market(1.5), u), InvalidParams);
}

TEST_CASE("bracket and grid") {
  const auto b = default_price_bracket(market());
  CHECK(b.lo == 1e-3);
  CHECK(b.hi == doctest::Approx(999.0).epsilon(1e-12));
  const auto g = price_grid(b, 100);
  CHECK(g.size() == 100);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == b.hi);
  CHECK(g[1] / g[0] == doctest::Approx(g[2] / g[1]));
  const auto lin = price_grid({0.5, 1.5}, 11);
  CHECK(lin[5] == doctest::Approx(1.0));
}

TEST_CASE("optimizer on a narrow bracket") {
  const auto r = optimize_price(market(), TypeDistribution(), {0.5, 1.5}, 11);
  CHECK(r.grid_optimal);
  CHECK(r.max_decomposition_residual <= 1e-6);
  CHECK(r.max_transfer_demand_residual <= 1e-10);
  CHECK(r.regular);
  CHECK(r.t_psi == 0.5);
  CHECK(r.sweep.size() == 11);
  CHECK(r.revenue_star >= r.sweep.front().revenue);
  CHECK_THROWS_AS(optimize_price(market(), TypeDistribution(), {1.0, 0.5}, 11), InvalidParams);
}

}
