#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sisearch/errors.hpp"
#include "sisearch/search.hpp"
#include "sisearch/verification.hpp"

using namespace sisearch;

namespace {

MarketParams consumer(int n, double c, double u = 1.0) {
  MarketParams m;
  m.n = n;
  m.c = c;
  m.u = u;
  return m;
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("descending index order") {
  std::mt19937_64 rng(1);
  const double s[] = {0.4, 0.1};
  const double tau[] = {0.8, 0.5};
  CHECK(dsir_order(s, tau, consumer(2, 0.5), rng) == std::vector<int>{0, 1});
  const double zero[] = {0.0, 0.0, 0.0};
  CHECK(dsir_order(zero, zero, consumer(3, 0.5), rng).empty());
}

TEST_CASE("ties are broken uniformly") {
  const double s[] = {0.2, 0.2};
  const double tau[] = {0.6, 0.6};
  const int draws = 10000;
  int first_zero = 0;
  for (int i = 0; i < draws; ++i) {
    auto rng = replication_engine(5, i);
    if (dsir_order(s, tau, consumer(2, 0.5), rng).front() == 0) ++first_zero;
  }
  const double se = std::sqrt(0.25 / draws);
  CHECK(std::abs(first_zero / double(draws) - 0.5) <= 3 * se);
}

TEST_CASE("single box") {
  std::mt19937_64 rng(1);
  const double s[] = {0.0};
  const double tau[] = {0.5};
  const auto plan = dsir_order(s, tau, consumer(1, 0.3), rng);
  CHECK(plan == std::vector<int>{0});
  CHECK(plan_value(plan, s, tau, consumer(1, 0.3)) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(brute_force_consumer_value(s, tau, consumer(1, 0.3)).value == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("free inspections are never skipped") {
  std::mt19937_64 rng(1);
  const double s[] = {0.5, 0.5, 0.5, 0.5};
  const double tau[] = {0.3, 0.9, 0.0, 0.6};
  auto plan = dsir_order(s, tau, consumer(4, 0.5), rng);
  const double value = plan_value(plan, s, tau, consumer(4, 0.5));
  std::sort(plan.begin(), plan.end());
  CHECK(plan == std::vector<int>{0, 1, 3});
  const double want = 1.0 - 0.7 * 0.1 * 0.4;
  CHECK(value == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("brute force refuses large problems") {
  std::vector<double> s(9, 0.1), tau(9, 0.5);
  CHECK_THROWS_AS(brute_force_consumer_value(s, tau, consumer(9, 0.5)), SizeError);
}

TEST_CASE("search stops at the first match and charges net costs") {
  const double s[] = {0.1, 0.3, 0.2};
  const std::vector<int> plan = {1, 2, 0};
  MarketParams m = consumer(3, 0.5);
  m.p = 2.0;
  const auto out = run_search(plan, {true, false, true}, s, m);
  CHECK(out.inspected == std::vector<int>{1, 2});
  REQUIRE(out.matched_firm);
  CHECK(*out.matched_firm == 2);
  CHECK(out.consumer_net_cost == doctest::Approx(0.2 + 0.3));
  REQUIRE(out.transfers_paid.size() == 2);
  CHECK(out.transfers_paid[0].second == doctest::Approx(0.6));
}

TEST_CASE("property: DSIR matches exhaustive search on random problems") {
  CHECK(dsir_oracle_gap(200, 6, 99) <= 1e-12);
}

TEST_CASE("replication streams are reproducible") {
  auto a = replication_engine(42, 17);
  auto b = replication_engine(42, 17);
  auto c = replication_engine(42, 18);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

TEST_CASE("simulation is identical serially and in parallel") {
  MarketParams m;
  const auto sol = solve_reasonable_equilibrium(m, TypeDistribution());
  SimulationOptions opt;
  opt.replications = 20000;
  opt.workers = 1;
  const auto serial = simulate_market(sol, opt);
  opt.workers = 4;
  const auto parallel = simulate_market(sol, opt);
  CHECK(serial.match_rate.mean == parallel.match_rate.mean);
  CHECK(serial.mean_consumer_cost.mean == parallel.mean_consumer_cost.mean);
  CHECK(serial.mean_transfer_per_firm.std_error == parallel.mean_transfer_per_firm.std_error);
  for (std::size_t i = 0; i < serial.attention_by_type_bin.size(); ++i)
    CHECK(serial.attention_by_type_bin[i].inspected == parallel.attention_by_type_bin[i].inspected);
  CHECK(serial.inspections_after_match == 0);
}

TEST_CASE("posteriors on the equilibrium path") {
  MarketParams m;
  const auto sol = solve_reasonable_equilibrium(m, TypeDistribution());
  CHECK(on_path_posterior(sol, 0.9) == doctest::Approx(sol.distribution.truncated_mean(sol.t_upper)));
  CHECK(on_path_posterior(sol, 0.4) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(on_path_posterior(sol, 0.1) == doctest::Approx(0.125));
}

TEST_CASE("simulated attention agrees with the closed form") {
  MarketParams m;
  const auto sol = solve_reasonable_equilibrium(m, TypeDistribution());
  SimulationOptions opt;
  opt.replications = 30000;
  const auto r = simulate_market(sol, opt);
  CHECK(max_attention_z(r) <= 3.5);
  CHECK(match_rate_z(r) <= 3.5);
  CHECK_THROWS_AS(simulate_market(sol, SimulationOptions{0, 1, 1, 50, 10}), InvalidParams);
}

}
