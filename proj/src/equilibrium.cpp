#include "sisearch/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sisearch/attention.hpp"
#include "sisearch/errors.hpp"
#include "sisearch/numerics.hpp"
#include "sisearch/quadrature.hpp"

namespace sisearch {
namespace {

constexpr double kCutoffTolerance = 1e-10;
constexpr double kCapTolerance = 1e-12;

// Independent route to int_{lo}^{hi} q_sep for the envelope diagnostic.
double kronrod_attention_integral(const SeparatingBranch& branch, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  auto f = [&branch](double t) { return branch.attention(t); };
  std::vector<double> edges{lo};
  for (double b : branch.distribution().breakpoints())
    if (b > lo && b < hi) edges.push_back(b);
  edges.push_back(hi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, edges[i], edges[i + 1], 6, 1e-11);
  return total;
}

double schedule_interpolation_error(const SeparatingBranch& branch, const SubsidySchedule& schedule) {
  const auto& grid = schedule.grid_t();
  if (grid.size() < 2) return 0.0;
  double worst = 0.0;
  const std::size_t probes = std::min<std::size_t>(200, grid.size() - 1);
  for (std::size_t k = 0; k < probes; ++k) {
    const std::size_t i = k * (grid.size() - 1) / probes;
    const double mid = 0.5 * (grid[i] + grid[i + 1]);
    worst = std::max(worst, std::abs(schedule.separating_value(mid) - branch.subsidy(mid)));
  }
  return worst;
}

}  // namespace

LowerCutoff lower_cutoff(const MarketParams& params) {
  params.validate();
  if (params.p == 0.0) return {0.0, 0.0};
  const double t = params.p * params.c / (1.0 + params.u * params.p);
  return {t, t / params.p};
}

double sigma_sep(double t, double t0, const MarketParams& params, const TypeDistribution& d) {
  if (params.p == 0.0) throw PriceZeroError("separating subsidy is undefined at p = 0");
  if (t < t0) throw DomainError("sigma_sep: t below the anchor t0");
  const auto q = [&](double x) { return q_sep(x, t0, params, d); };
  const double integral = integrate_with_breaks(q, t0, t, d.breakpoints(), 64);
  return t / params.p - integral / (params.p * q(t));
}

double boundary_gap(double x, const SeparatingBranch& branch) {
  const MarketParams& pr = branch.params();
  return q_pool(x, pr, branch.distribution()) * (x - pr.p * pr.c) - branch.cumulative(x);
}

double boundary_gap(double x, double t0, const MarketParams& params, const TypeDistribution& d) {
  const auto q = [&](double y) { return q_sep(y, t0, params, d); };
  return q_pool(x, params, d) * (x - params.p * params.c) - integrate_with_breaks(q, t0, x, d.breakpoints(), 64);
}

UpperCutoff upper_cutoff(const SeparatingBranch& branch) {
  const MarketParams& pr = branch.params();
  const double c = pr.c;
  UpperCutoff out;
  if (branch.subsidy(1.0) <= c) return out;

  const double t_cap = bisect([&](double t) { return branch.subsidy(t) - c; }, branch.t0(), 1.0, kCapTolerance,
                              "cap crossing");
  out.t_cap = t_cap;
  // The gap is strictly negative at p c, where pooling pays nothing, unless
  // the anchor sits so close to p c that the separating integral vanishes.
  const double pc = pr.p * c;
  const auto gap = [&](double x) { return boundary_gap(x, branch); };
  out.t1 = gap(pc) < 0.0 ? bisect(gap, pc, t_cap, kCutoffTolerance, "boundary indifference") : pc;
  out.pooling_active = true;
  return out;
}

UpperCutoff upper_cutoff(double t0, const MarketParams& params, const TypeDistribution& d) {
  params.validate();
  if (params.p == 0.0) throw PriceZeroError("upper cutoff needs p > 0");
  return upper_cutoff(SeparatingBranch(t0, params, d));
}

double EquilibriumSolution::attention(double t) const {
  if (t < t0) return 0.0;
  if (pooling_active && t >= t_upper) return pool_attention;
  return branch ? branch->attention(t) : 0.0;
}

double EquilibriumSolution::pooled_posterior() const {
  return pooling_active ? distribution.truncated_mean(t_upper) : 0.0;
}

EquilibriumSolution sis_schedule(double t0, const MarketParams& params, const TypeDistribution& d) {
  const LowerCutoff lc = lower_cutoff(params);
  const double top = std::min(params.p * params.c, 1.0);
  if (t0 < lc.t - 1e-14 || t0 > top + 1e-12)
    throw CutoffOutOfRange("anchor t0 = " + std::to_string(t0) + " outside [" + std::to_string(lc.t) + ", " +
                           std::to_string(top) + "]");
  if (t0 >= 1.0) throw CutoffOutOfRange("anchor t0 = 1 leaves no participating types");
  t0 = std::max(t0, lc.t);

  EquilibriumSolution sol;
  sol.params = params;
  sol.distribution = d;
  sol.t_lower = lc.t;
  sol.s_lower = lc.s;
  sol.t0 = t0;

  if (t0 >= params.p * params.c) {
    // Free subsidies, or an anchor already at the cap: everyone from t0 up pools at c.
    sol.schedule = SubsidySchedule::full_pool(t0, params.c);
    sol.t_upper = t0;
    if (params.p > 0.0) sol.t_cap = t0;
    sol.pooling_active = true;
    sol.pool_attention = q_pool(t0, params, d);
    sol.diagnostics["boundary_residual"] = 0.0;
    sol.diagnostics["envelope_max_error"] = 0.0;
    sol.diagnostics["schedule_interp_max_error"] = 0.0;
  } else {
    auto branch = std::make_shared<const SeparatingBranch>(t0, params, d);
    const UpperCutoff uc = upper_cutoff(*branch);
    sol.branch = branch;
    sol.t_upper = uc.t1;
    sol.t_cap = uc.t_cap;
    sol.pooling_active = uc.pooling_active;
    sol.pool_attention = uc.pooling_active ? q_pool(uc.t1, params, d) : 1.0;
    sol.schedule = SubsidySchedule::separating(*branch, uc.t1, uc.pooling_active, params.c);
    sol.diagnostics["boundary_residual"] = uc.pooling_active ? std::abs(boundary_gap(uc.t1, *branch)) : 0.0;
    sol.diagnostics["envelope_max_error"] = envelope_residual(sol);
    sol.diagnostics["schedule_interp_max_error"] = schedule_interpolation_error(*branch, sol.schedule);
  }
  sol.diagnostics["ic_max_violation"] = check_incentive_compatibility(sol, 200, 200);
  return sol;
}

EquilibriumSolution solve_reasonable_equilibrium(const MarketParams& params, const TypeDistribution& d) {
  return sis_schedule(lower_cutoff(params).t, params, d);
}

double check_incentive_compatibility(const EquilibriumSolution& sol, std::size_t type_grid,
                                     std::size_t deviation_grid) {
  const double p = sol.params.p;
  const double c = sol.params.c;
  type_grid = std::max<std::size_t>(type_grid, 2);

  // (subsidy, attention it attracts) for every deviation considered.
  std::vector<std::pair<double, double>> deviations{{0.0, 0.0}};
  if (sol.pooling_active) deviations.emplace_back(c, sol.pool_attention);
  if (sol.branch) {
    const SubsidySchedule& sch = sol.schedule;
    const double s_lo = sch.grid_sigma().front();
    const double s_hi = sch.grid_sigma().back();
    const std::size_t m = std::max<std::size_t>(deviation_grid, 2);
    for (std::size_t k = 0; k < m; ++k) {
      const double s = s_lo + (s_hi - s_lo) * static_cast<double>(k) / static_cast<double>(m - 1);
      deviations.emplace_back(s, sol.branch->attention(sch.inverse(s)));
    }
    // Off-path subsidies: below the entry level nobody looks; between the top of
    // the branch and the cap the best belief is the top separating type.
    for (double frac : {0.25, 0.5, 0.75}) {
      deviations.emplace_back(frac * s_lo, 0.0);
      if (sol.pooling_active) deviations.emplace_back(s_hi + frac * (c - s_hi), sol.branch->attention(sol.t_upper));
    }
  }

  std::vector<double> types;
  types.reserve(type_grid + 2);
  for (std::size_t i = 0; i < type_grid; ++i)
    types.push_back(static_cast<double>(i) / static_cast<double>(type_grid - 1));
  types.push_back(sol.t0);
  types.push_back(sol.t_upper);

  double worst = -HUGE_VAL;
  for (double t : types) {
    const double eq = (t - p * sol.subsidy(t)) * sol.attention(t);
    double best = eq;
    for (const auto& [s, q] : deviations) best = std::max(best, (t - p * s) * q);
    worst = std::max(worst, best - eq);
  }
  return worst;
}

double envelope_residual(const EquilibriumSolution& sol, std::size_t points) {
  if (!sol.branch || points == 0) return 0.0;
  const SeparatingBranch& br = *sol.branch;
  const double p = sol.params.p;
  const double lo = sol.t0;
  const double hi = sol.t_upper;
  double worst = 0.0;
  double prev_t = lo;
  double running = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    running += kronrod_attention_integral(br, prev_t, t);
    prev_t = t;
    const double lhs = br.attention(t) * (t - p * sol.schedule.separating_value(t));
    worst = std::max(worst, std::abs(lhs - running));
  }
  return worst;
}

}  // namespace sisearch
