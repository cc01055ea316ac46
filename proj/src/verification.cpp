#include "sisearch/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sisearch/attention.hpp"
#include "sisearch/kernels.hpp"
#include "sisearch/platform.hpp"
#include "sisearch/serialize.hpp"
#include "sisearch/welfare.hpp"

namespace sisearch {

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

double max_attention_z(const SimulationReport& r) {
  double worst = 0.0;
  for (const AttentionBin& b : r.attention_by_type_bin) {
    if (b.draws == 0) continue;
    const double q = b.closed_form;
    const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(b.draws));
    const double gap = std::abs(b.empirical - q);
    if (se > 0.0) {
      worst = std::max(worst, gap / se);
    } else if (gap > 1e-12) {
      return HUGE_VAL;
    }
  }
  return worst;
}

double match_rate_z(const SimulationReport& r) {
  const double m = r.match_rate_closed_form;
  const double se = std::sqrt(m * (1.0 - m) / static_cast<double>(r.replications));
  const double gap = std::abs(r.match_rate.mean - m);
  if (se > 0.0) return gap / se;
  return gap > 1e-12 ? HUGE_VAL : 0.0;
}

double dsir_oracle_gap(std::size_t instances, int max_firms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> firms(1, max_firms);
  double worst = 0.0;
  for (std::size_t k = 0; k < instances; ++k) {
    MarketParams params;
    params.n = firms(rng);
    params.c = 0.05 + 1.45 * unit(rng);
    params.u = 0.5 + unit(rng);
    std::vector<double> s(params.n), tau(params.n);
    for (int j = 0; j < params.n; ++j) {
      if (j > 0 && unit(rng) < 0.2) {
        const int src = static_cast<int>(unit(rng) * j);
        s[j] = s[src];
        tau[j] = tau[src];
        continue;
      }
      s[j] = params.c * unit(rng);
      tau[j] = unit(rng);
    }
    const std::vector<int> plan = dsir_order(s, tau, params, rng);
    const double v = plan_value(plan, s, tau, params);
    worst = std::max(worst, std::abs(v - brute_force_consumer_value(s, tau, params).value));
  }
  return worst;
}

double kernel_equivalence_gap(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  double worst = 0.0;
  for (std::size_t len = 1; len <= 67; ++len) {
    std::vector<double> x(len), y(len), a(len), b(len);
    for (std::size_t i = 0; i < len; ++i) {
      x[i] = unit(rng);
      y[i] = unit(rng) - 0.5;
    }
    for (unsigned e : {0u, 1u, 2u, 9u, 499u}) {
      kernels::scalar::complement_power(x, e, a);
      kernels::complement_power(x, e, b);
      for (std::size_t i = 0; i < len; ++i) worst = std::max(worst, rel(b[i], a[i]));
    }
    worst = std::max(worst, rel(kernels::dot(x, y), kernels::scalar::dot(x, y)));
    std::vector<double> m(len * 16), out_a(16), out_b(16);
    for (double& v : m) v = unit(rng) - 0.5;
    kernels::scalar::matvec(m, x, out_a);
    kernels::matvec(m, x, out_b);
    for (std::size_t i = 0; i < 16; ++i) worst = std::max(worst, rel(out_b[i], out_a[i]));
  }
  return worst;
}

namespace {

Check make(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, value <= threshold, std::move(detail)};
}

Check flag(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? 0.0 : 1.0, 0.0, ok, std::move(detail)};
}

std::vector<double> scaled(double base, std::initializer_list<double> factors) {
  std::vector<double> out;
  for (double f : factors) out.push_back(base * f);
  return out;
}

}  // namespace

VerificationReport verify_market(const MarketParams& params, const TypeDistribution& d, const VerifyOptions& options) {
  params.validate();
  VerificationReport rep;
  auto& out = rep.checks;
  const EquilibriumSolution sol = solve_reasonable_equilibrium(params, d);
  const double p = params.p;

  if (p > 0.0) out.push_back(make("schedule_entry", std::abs(sol.subsidy(sol.t0) - sol.t0 / p), 1e-12));

  // Nondecreasing, within [0, c], and never above t / p (no type pays to lose money).
  double drop = 0.0;
  double excess = 0.0;
  double prev = sol.subsidy(0.0);
  for (int i = 0; i <= 2000; ++i) {
    const double t = i / 2000.0;
    const double s = sol.subsidy(t);
    drop = std::max(drop, prev - s);
    excess = std::max({excess, -s, s - params.c});
    if (p > 0.0 && t >= sol.t0) excess = std::max(excess, s - t / p);
    prev = s;
  }
  out.push_back(make("schedule_monotone", drop, 1e-12));
  out.push_back(make("schedule_bounds", excess, 1e-12));

  if (sol.pooling_active) {
    const double qp = q_pool(sol.t_upper, params, d);
    const double qs = q_sep(sol.t_upper, sol.t0, params, d);
    out.push_back(flag("pool_attention_above_separating", qp > qs));
  }
  out.push_back(make("boundary_residual", sol.diagnostics.at("boundary_residual"), 1e-8));
  out.push_back(make("schedule_interpolation", sol.diagnostics.at("schedule_interp_max_error"), 1e-8));
  out.push_back(make("envelope_identity", envelope_residual(sol, 200), 1e-8));
  out.push_back(make("incentive_compatibility", check_incentive_compatibility(sol, options.ic_grid, options.ic_grid),
                     1e-6));

  const WelfareReport w = welfare_report(sol);
  const double c_formula = p > 0.0 ? params.c * w.Q - w.phi / p : params.c * w.Q - w.demand;
  out.push_back(make("consumer_cost_formula", std::abs(w.C - c_formula), 0.0));
  out.push_back(make("welfare_sum", std::abs(w.W - (w.CS + w.PS)), 1e-8));
  out.push_back(make("welfare_direct", w.diagnostics.at("w_direct_residual"), 1e-8));
  out.push_back(make("match_accounting", w.diagnostics.at("match_accounting_residual"), 1e-8));
  out.push_back(make("producer_surplus_identity", producer_surplus_identity_check(sol), 1e-6));
  if (p > 0.0) {
    out.push_back(make("transfer_virtual_value", transfer_virtual_value_check(sol), 1e-6));
    const PricePoint pt = evaluate_price(p, params, d);
    out.push_back(make("revenue_decomposition", pt.decomposition_residual, 1e-6));
    out.push_back(make("transfer_demand", pt.transfer_demand_residual, 1e-8));
  }

  const SimulationReport sim = simulate_market(sol, options.simulation);
  out.push_back(make("simulated_attention_z", max_attention_z(sim), 3.0));
  out.push_back(make("simulated_match_rate_z", match_rate_z(sim), 3.0));
  out.push_back(make("inspections_after_match", static_cast<double>(sim.inspections_after_match), 0.0));

  out.push_back(make("dsir_brute_force",
                     dsir_oracle_gap(options.search_instances, options.search_max_firms, options.simulation.seed),
                     1e-12));
  out.push_back(make("kernel_equivalence", kernel_equivalence_gap(options.simulation.seed), 1e-13,
                     std::string(kernels::isa_name(kernels::active_isa()))));

  if (options.sweeps) {
    auto sweep_check = [&](SweepAxis axis, const std::vector<double>& grid) {
      const SweepResult r = comparative_statics_sweep(params, d, axis, grid, options.simulation.workers);
      std::string failed;
      for (const MonotoneVerdict& v : r.verdicts)
        if (!v.holds) failed += (failed.empty() ? "" : ",") + v.quantity;
      for (const SweepPoint& pt : r.points)
        if (!pt.ok) failed += (failed.empty() ? "" : ",") + ("point " + format_number(pt.value));
      out.push_back(flag("comparative_statics_" + axis_name(axis), r.all_hold(), failed));
    };
    if (p > 0.0) sweep_check(SweepAxis::price, scaled(p, {0.6, 0.8, 1.0, 1.2, 1.4}));
    sweep_check(SweepAxis::cost, scaled(params.c, {0.6, 0.8, 1.0, 1.2, 1.4}));
    sweep_check(SweepAxis::firms, default_sweep_grid(SweepAxis::firms));
  }
  return rep;
}

}  // namespace sisearch
