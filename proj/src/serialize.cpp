#include "sisearch/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "sisearch/errors.hpp"

namespace sisearch {

namespace {

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json diagnostics_json(const std::map<std::string, double>& diag) {
  Json out = Json::object();
  for (const auto& [k, v] : diag) out[k] = number_or_null(v);
  return out;
}

Json estimate_json(const Estimate& e) { return {{"mean", e.mean}, {"std_error", e.std_error}}; }

const char* kCsvVersionLine = "# schema_version=1\n";

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const MarketParams& params) {
  return {{"n", params.n}, {"c", params.c}, {"p", params.p}, {"u", params.u}};
}

Json to_json(const TypeDistribution& d) {
  switch (d.kind()) {
    case TypeDistribution::Kind::uniform:
      return {{"kind", "uniform"}};
    case TypeDistribution::Kind::beta:
      return {{"kind", "beta"}, {"alpha", d.alpha()}, {"beta", d.beta_param()}};
    case TypeDistribution::Kind::piecewise: {
      Json knots = Json::array();
      for (const auto& [t, F] : d.knots()) knots.push_back({t, F});
      return {{"kind", "piecewise"}, {"knots", knots}};
    }
  }
  return {};
}

TypeDistribution distribution_from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    TypeDistribution d;
    if (kind == "uniform") {
      d = TypeDistribution::uniform();
    } else if (kind == "beta") {
      d = TypeDistribution::beta(j.at("alpha").get<double>(), j.at("beta").get<double>());
    } else if (kind == "piecewise") {
      std::vector<TypeDistribution::Knot> knots;
      for (const auto& k : j.at("knots")) {
        if (!k.is_array() || k.size() != 2) throw InvalidParams("piecewise knots must be [t, F] pairs");
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      d = TypeDistribution::piecewise(std::move(knots));
    } else {
      throw InvalidParams("unknown distribution kind '" + kind + "'");
    }
    if (j.contains("tolerance")) d = d.with_tolerance(j.at("tolerance").get<double>());
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams(std::string("distribution spec: ") + e.what());
  }
}

Json to_json(const EquilibriumSolution& sol) {
  const SubsidySchedule& s = sol.schedule;
  Json grid = Json::array();
  for (std::size_t i = 0; i < s.grid_t().size(); ++i) grid.push_back({s.grid_t()[i], s.grid_sigma()[i]});
  return {
      {"schema_version", kSchemaVersion},
      {"params", to_json(sol.params)},
      {"distribution", to_json(sol.distribution)},
      {"t_lower", sol.t_lower},
      {"s_lower", sol.s_lower},
      {"t0", sol.t0},
      {"t_upper", sol.t_upper},
      {"t_cap", sol.t_cap ? Json(*sol.t_cap) : Json(nullptr)},
      {"pooling_active", sol.pooling_active},
      {"pool_attention", sol.pool_attention},
      {"pooled_posterior", sol.pooling_active ? Json(sol.pooled_posterior()) : Json(nullptr)},
      {"diagnostics", diagnostics_json(sol.diagnostics)},
      {"schedule", {{"t0", s.t0()}, {"t1", s.t1()}, {"cap", s.cap()}, {"pooling", s.pooling()}, {"grid", grid}}},
  };
}

Json to_json(const SimulationReport& r) {
  Json bins = Json::array();
  for (const AttentionBin& b : r.attention_by_type_bin)
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"draws", b.draws},
                    {"inspected", b.inspected},
                    {"empirical", b.empirical},
                    {"closed_form", b.closed_form},
                    {"std_error", b.std_error}});
  Json sbins = Json::array();
  for (const SubsidyBin& b : r.subsidy_bins)
    sbins.push_back({{"lo", b.lo},
                     {"hi", b.hi},
                     {"draws", b.draws},
                     {"inspected", b.inspected},
                     {"empirical", b.empirical},
                     {"std_error", b.std_error}});
  return {
      {"schema_version", kSchemaVersion},
      {"replications", r.replications},
      {"rng_seed", r.rng_seed},
      {"match_rate", estimate_json(r.match_rate)},
      {"match_rate_closed_form", r.match_rate_closed_form},
      {"mean_consumer_cost", estimate_json(r.mean_consumer_cost)},
      {"mean_transfer_per_firm", estimate_json(r.mean_transfer_per_firm)},
      {"inspections_after_match", r.inspections_after_match},
      {"attention_by_type_bin", bins},
      {"subsidy_bins", sbins},
  };
}

Json to_json(const WelfareReport& r) {
  return {
      {"schema_version", kSchemaVersion},
      {"Q", r.Q},
      {"phi", r.phi},
      {"m", r.m},
      {"C", r.C},
      {"CS", r.CS},
      {"PS", r.PS},
      {"W", r.W},
      {"total_inspections", r.total_inspections},
      {"typed_attention", r.typed_attention},
      {"demand", r.demand},
      {"ps_per_firm", r.ps_per_firm},
      {"diagnostics", diagnostics_json(r.diagnostics)},
  };
}

Json to_json(const SweepResult& r) {
  Json points = Json::array();
  for (const SweepPoint& p : r.points) {
    Json pt = {{"value", p.value}, {"ok", p.ok}, {"params", to_json(p.params)}};
    if (p.ok) {
      pt["t_lower"] = p.t_lower;
      pt["t_upper"] = p.t_upper;
      pt["pooling_active"] = p.pooling_active;
      Json w = to_json(p.welfare);
      w.erase("schema_version");
      pt["welfare"] = w;
    } else {
      pt["error"] = p.error;
    }
    points.push_back(pt);
  }
  Json verdicts = Json::array();
  for (const MonotoneVerdict& v : r.verdicts)
    verdicts.push_back({{"quantity", v.quantity},
                        {"expected", direction_name(v.expected)},
                        {"observed", direction_name(v.observed)},
                        {"holds", v.holds},
                        {"sequence", v.sequence}});
  return {{"schema_version", kSchemaVersion},
          {"axis", axis_name(r.axis)},
          {"all_hold", r.all_hold()},
          {"points", points},
          {"verdicts", verdicts}};
}

Json to_json(const PlatformResult& r) {
  Json sweep = Json::array();
  for (const PricePoint& p : r.sweep) {
    if (!p.ok) {
      sweep.push_back({{"p", p.p}, {"ok", false}, {"error", p.error}});
      continue;
    }
    sweep.push_back({{"p", p.p},
                     {"ok", true},
                     {"demand", p.demand},
                     {"revenue", p.revenue},
                     {"sep_branch", p.sep_branch},
                     {"pool_branch", p.pool_branch},
                     {"phi", p.phi},
                     {"t_lower", p.t_lower},
                     {"t_upper", p.t_upper},
                     {"pooling_active", p.pooling_active},
                     {"decomposition_residual", p.decomposition_residual},
                     {"transfer_demand_residual", p.transfer_demand_residual}});
  }
  return {
      {"schema_version", kSchemaVersion},
      {"bracket", {r.bracket.lo, r.bracket.hi}},
      {"p_star", r.p_star},
      {"revenue_star", r.revenue_star},
      {"t_lower_star", r.t_lower_star},
      {"t_upper_star", r.t_upper_star},
      {"pooling_at_star", r.pooling_at_star},
      {"t_psi", number_or_null(r.t_psi)},
      {"regular", r.regular},
      {"interior", r.interior},
      {"grid_optimal", r.grid_optimal},
      {"excess_search", r.excess_search},
      {"pool_branch_monotone", r.pool_branch_monotone},
      {"max_decomposition_residual", r.max_decomposition_residual},
      {"max_transfer_demand_residual", r.max_transfer_demand_residual},
      {"warnings", r.warnings},
      {"sweep", sweep},
  };
}

std::string schedule_plot_data(const EquilibriumSolution& sol) {
  std::ostringstream out;
  auto row = [&](double t, double s) { out << format_number(t) << ' ' << format_number(s) << '\n'; };
  out << "# t sigma\n";
  const SubsidySchedule& s = sol.schedule;
  if (s.t0() > 0.0) {
    row(0.0, 0.0);
    row(s.t0(), 0.0);
  }
  if (s.has_separating_branch()) {
    const auto& ts = s.grid_t();
    const auto& ss = s.grid_sigma();
    for (std::size_t i = 0; i < ts.size(); ++i) row(ts[i], ss[i]);
  }
  if (s.pooling()) {
    row(s.t1(), s.cap());
    if (s.t1() < 1.0) row(1.0, s.cap());
  }
  return out.str();
}

std::string attention_bins_csv(const SimulationReport& r) {
  std::ostringstream out;
  out << kCsvVersionLine << "bin_center,empirical,closed_form,stderr\n";
  for (const AttentionBin& b : r.attention_by_type_bin)
    out << format_number(0.5 * (b.lo + b.hi)) << ',' << format_number(b.empirical) << ','
        << format_number(b.closed_form) << ',' << format_number(b.std_error) << '\n';
  return out.str();
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream out;
  out << kCsvVersionLine << axis_name(r.axis)
      << ",Q,phi,m,C,CS,PS,W,total_inspections,ps_per_firm,t_lower,t_upper,pooling_active\n";
  for (const SweepPoint& p : r.points) {
    if (!p.ok) continue;
    const WelfareReport& w = p.welfare;
    out << format_number(p.value);
    for (double x : {w.Q, w.phi, w.m, w.C, w.CS, w.PS, w.W, w.total_inspections, w.ps_per_firm, p.t_lower,
                     p.t_upper})
      out << ',' << format_number(x);
    out << ',' << (p.pooling_active ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string platform_sweep_csv(const PlatformResult& r) {
  std::ostringstream out;
  out << kCsvVersionLine << "p,D,R,sep_branch,pool_branch,t_lower,t_upper\n";
  for (const PricePoint& p : r.sweep) {
    if (!p.ok) continue;
    out << format_number(p.p);
    for (double x : {p.demand, p.revenue, p.sep_branch, p.pool_branch, p.t_lower, p.t_upper})
      out << ',' << format_number(x);
    out << '\n';
  }
  return out.str();
}

}  // namespace sisearch
