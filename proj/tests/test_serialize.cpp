#include <doctest.h>

#include <charconv>
#include <cmath>
#include <sstream>

#include "sisearch/errors.hpp"
#include "sisearch/serialize.hpp"

using namespace sisearch;

namespace {

std::vector<std::pair<double, double>> rows(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double a, b;
    std::string extra;
    ls >> a >> b;
    REQUIRE_FALSE(ls.fail());
    const bool more = static_cast<bool>(ls >> extra);
    REQUIRE_FALSE(more);
    out.emplace_back(a, b);
  }
  return out;
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("distribution specs round-trip") {
  const TypeDistribution ds[] = {TypeDistribution::uniform(), TypeDistribution::beta(2.5, 0.75),
                                 TypeDistribution::piecewise({{0, 0}, {0.4, 0.2}, {1, 1}})};
  for (const auto& d : ds) {
    const TypeDistribution back = distribution_from_json(to_json(d));
    CHECK(back.kind() == d.kind());
    CHECK(back.cdf(0.37) == d.cdf(0.37));
  }
  CHECK_THROWS_AS(distribution_from_json(Json{{"kind", "normal"}}), InvalidParams);
  CHECK_THROWS_AS(distribution_from_json(Json{{"kind", "beta"}, {"alpha", 2}}), InvalidParams);
  CHECK_THROWS_AS(distribution_from_json(Json{{"kind", "piecewise"}, {"knots", {{0, 0}, {1}}}}), InvalidParams);
}

TEST_CASE("numbers round-trip exactly") {
  for (double x : {0.1, 1.0 / 3.0, 0.5071603600685188, 1e-300, 999.0}) {
    const std::string s = format_number(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("plot data marks both jumps with repeated abscissae") {
  MarketParams m;
  const auto sol = solve_reasonable_equilibrium(m, TypeDistribution());
  const auto r = rows(schedule_plot_data(sol));
  REQUIRE(r.size() > 10);
  CHECK(r.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(r.back() == std::pair<double, double>{1.0, 0.5});
  std::vector<double> repeated;
  for (std::size_t i = 1; i < r.size(); ++i) {
    CHECK(r[i].first >= r[i - 1].first);
    if (r[i].first == r[i - 1].first) {
      repeated.push_back(r[i].first);
      CHECK(r[i].second > r[i - 1].second);
    }
  }
  REQUIRE(repeated.size() == 2);
  CHECK(repeated[0] == sol.t_lower);
  CHECK(repeated[1] == sol.t_upper);
}

TEST_CASE("plot data without pooling ends on the branch") {
  MarketParams m;
  m.p = 1.8;
  const auto r = rows(schedule_plot_data(solve_reasonable_equilibrium(m, TypeDistribution())));
  CHECK(r.back().first == 1.0);
  CHECK(r.back().second < 0.5);
}

TEST_CASE("documents carry the schema version") {
  MarketParams m;
  const auto sol = solve_reasonable_equilibrium(m, TypeDistribution());
  const Json j = to_json(sol);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("pooling_active") == true);
  CHECK(j.at("schedule").at("grid").size() == sol.schedule.grid_t().size());
  CHECK(to_json(welfare_report(sol)).at("schema_version") == kSchemaVersion);
}

TEST_CASE("csv headers are fixed") {
  SimulationReport r;
  r.attention_by_type_bin.push_back({0.0, 0.5, 10, 4, 0.4, 0.38, 0.15});
  const std::string csv = attention_bins_csv(r);
  CHECK(csv.rfind("# schema_version=1\nbin_center,empirical,closed_form,stderr\n0.25,0.4,0.38,0.15\n", 0) == 0);
  PlatformResult pr;
  CHECK(platform_sweep_csv(pr) == "# schema_version=1\np,D,R,sep_branch,pool_branch,t_lower,t_upper\n");
  SweepResult sr;
  sr.axis = SweepAxis::cost;
  CHECK(sweep_csv(sr).find("\ncost,Q,phi,m,C,CS,PS,W,") != std::string::npos);
}

}
