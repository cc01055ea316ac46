#include <doctest.h>

#include <cmath>

#include "sisearch/quadrature.hpp"
#include "sisearch/welfare.hpp"

using namespace sisearch;

namespace {

MarketParams market(double p, double c = 0.5, int n = 10) {
  MarketParams m;
  m.n = n;
  m.c = c;
  m.p = p;
  return m;
}

// Independent quadrature oracle at Uniform, n = 10, c = 0.5, p = 1.
constexpr double kQ = 0.13333091154;
constexpr double kCS = 0.99466464003;
constexpr double kPS = 0.33509967771;
constexpr double kPhi = 0.066310976;

}  // namespace

TEST_SUITE("welfare") {

TEST_CASE("base point values") {
  const auto w = welfare_report(solve_reasonable_equilibrium(market(1.0), TypeDistribution()));
  CHECK(w.Q == doctest::Approx(kQ).epsilon(1e-9));
  CHECK(w.CS == doctest::Approx(kCS).epsilon(1e-9));
  CHECK(w.PS == doctest::Approx(kPS).epsilon(1e-9));
  CHECK(w.phi == doctest::Approx(kPhi).epsilon(1e-7));
  CHECK(w.m == doctest::Approx(1.0 - std::pow(1.0 - 0.46875, 10)).epsilon(1e-14));
  CHECK(w.total_inspections == doctest::Approx(10 * w.Q));
}

TEST_CASE("accounting identities") {
  for (double p : {0.6, 1.0, 1.8}) {
    const auto sol = solve_reasonable_equilibrium(market(p), TypeDistribution());
    const auto w = welfare_report(sol);
    CHECK(w.C == sol.params.c * w.Q - w.phi / p);
    CHECK(std::abs(w.W - (w.CS + w.PS)) <= 1e-12);
    CHECK(w.diagnostics.at("w_direct_residual") <= 1e-8);
    CHECK(w.diagnostics.at("match_accounting_residual") <= 1e-8);
    CHECK(producer_surplus_identity_check(sol) <= 1e-6);
    CHECK(transfer_virtual_value_check(sol) <= 1e-6);
  }
}

TEST_CASE("at unit price the transfer drops out of total welfare") {
  const auto sol = solve_reasonable_equilibrium(market(1.0), TypeDistribution());
  const auto w = welfare_report(sol);
  const double inspection_cost = integrate_with_breaks(
      [&](double t) { return (0.5 - t) * sol.attention(t); }, 0.0, 1.0, std::vector<double>{sol.t0, sol.t_upper}, 512);
  CHECK(w.W == doctest::Approx(w.m - 10 * inspection_cost).epsilon(1e-9));
}

TEST_CASE("single firm step schedule") {
  const auto sol = solve_reasonable_equilibrium(market(1.0, 0.5, 1), TypeDistribution());
  const auto w = welfare_report(sol);
  CHECK(w.m == doctest::Approx(0.46875).epsilon(1e-14));
  CHECK(w.phi == doctest::Approx(0.1875).epsilon(1e-12));
  CHECK(w.ps_per_firm == doctest::Approx(0.75 * 0.75 / 2).epsilon(1e-12));
  CHECK(producer_surplus_identity_check(sol) <= 1e-12);
}

TEST_CASE("no pool term without pooling") {
  const auto sol = solve_reasonable_equilibrium(market(1.8), TypeDistribution());
  CHECK(virtual_value_transfer(sol).pooling == 0.0);
}

TEST_CASE("zero price") {
  const auto w = welfare_report(solve_reasonable_equilibrium(market(0.0), TypeDistribution()));
  CHECK(w.phi == 0.0);
  CHECK(w.C == doctest::Approx(0.0).scale(1.0));
  CHECK(w.m == doctest::Approx(1.0 - std::pow(0.5, 10)));
}

TEST_CASE("comparative statics along price, cost and firm count") {
  const TypeDistribution u;
  const auto price = comparative_statics_sweep(market(1.0), u, SweepAxis::price, default_sweep_grid(SweepAxis::price));
  const auto cost = comparative_statics_sweep(market(1.0), u, SweepAxis::cost, default_sweep_grid(SweepAxis::cost));
  const auto nfirms = comparative_statics_sweep(market(1.0), u, SweepAxis::firms, default_sweep_grid(SweepAxis::firms));
  CHECK(price.all_hold());
  CHECK(cost.all_hold());
  CHECK(nfirms.all_hold());
  for (const char* q : {"Q", "m", "CS"}) {
    CHECK(price.verdict(q).observed == Direction::decreasing);
    CHECK(cost.verdict(q).observed == Direction::decreasing);
  }
  CHECK(nfirms.verdict("total_inspections").observed == Direction::increasing);
  CHECK(nfirms.verdict("m").observed == Direction::increasing);
  CHECK(nfirms.verdict("CS").observed == Direction::increasing);
  CHECK(nfirms.verdict("PS_per_firm").observed == Direction::decreasing);
  // Per-firm attention falls as rivals are added.
  CHECK(nfirms.verdict("Q").observed == Direction::decreasing);
  // The pooling cutoff rises with the price and falls with the number of firms.
  CHECK(price.verdict("t_upper").observed == Direction::increasing);
  CHECK(nfirms.points[1].t_upper > nfirms.points.back().t_upper);
}

TEST_CASE("participation vanishes as cost nears the admissibility bound") {
  const auto r = comparative_statics_sweep(market(1.0), TypeDistribution(), SweepAxis::cost, {1.2, 1.6, 1.9, 1.99});
  REQUIRE(r.all_hold());
  CHECK(r.points.back().welfare.Q < 0.01);
  CHECK(r.verdict("Q").observed == Direction::decreasing);
}

TEST_CASE("axis names") {
  CHECK(parse_axis("p") == SweepAxis::price);
  CHECK(axis_name(parse_axis("firms")) == "firms");
  CHECK_THROWS(parse_axis("temperature"));
}

}
