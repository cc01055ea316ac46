#include "sisearch/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sisearch/errors.hpp"
#include "sisearch/parallel.hpp"
#include "sisearch/quadrature.hpp"

namespace sisearch {

WelfareReport welfare_report(const EquilibriumSolution& sol) {
  const MarketParams& pr = sol.params;
  const TypeDistribution& d = sol.distribution;
  const double n = pr.n;

  double Q = 0.0;
  double phi = 0.0;
  double typed = 0.0;
  double demand = 0.0;
  if (sol.branch) {
    for (const PanelSample& pn : sol.branch->samples(sol.t_upper)) {
      for (std::size_t i = 0; i < kGaussOrder; ++i) {
        const double t = pn.t[i];
        const double wf = pn.w[i] * d.density(t);
        Q += wf * pn.q[i];
        phi += wf * (t * pn.q[i] - pn.cum[i]);  // p sigma q from the envelope identity
        typed += wf * t * pn.q[i];
        demand += wf * sol.schedule.separating_value(t) * pn.q[i];
      }
    }
  }
  if (sol.pooling_active) {
    const double tail = 1.0 - d.cdf(sol.t_upper);
    Q += sol.pool_attention * tail;
    phi += pr.p * pr.c * sol.pool_attention * tail;
    typed += sol.pool_attention * d.partial_moment(sol.t_upper);
    demand += pr.c * sol.pool_attention * tail;
  }

  WelfareReport r;
  r.Q = Q;
  r.phi = phi;
  r.typed_attention = typed;
  r.demand = demand;
  r.total_inspections = n * Q;
  r.m = 1.0 - std::pow(1.0 - d.partial_moment(sol.t0), pr.n);
  // At p = 0 nothing is paid, and the consumer's saving is the subsidy itself.
  r.C = pr.p > 0.0 ? pr.c * Q - phi / pr.p : pr.c * Q - demand;
  r.CS = pr.u * r.m - n * r.C;
  r.PS = n * typed - n * phi;
  r.ps_per_firm = r.PS / n;
  r.W = r.CS + r.PS;

  const double w_direct = pr.u * r.m + n * typed - n * pr.c * Q - n * (pr.p - 1.0) * demand;
  r.diagnostics["w_direct_residual"] = std::abs(r.W - w_direct);
  r.diagnostics["match_accounting_residual"] = std::abs(r.m - n * typed);
  if (pr.p > 0.0) {
    const double displayed = r.m + n * (typed - pr.c * Q) - n * (1.0 - 1.0 / pr.p) * phi;
    r.diagnostics["displayed_welfare_residual"] = std::abs(r.W - displayed);
  }
  r.diagnostics["transfer_demand_residual"] = std::abs(phi - pr.p * demand);
  return r;
}

double producer_surplus_identity_check(const EquilibriumSolution& sol) {
  const TypeDistribution& d = sol.distribution;
  std::vector<double> breaks = d.breakpoints();
  breaks.push_back(sol.t_upper);
  const double rhs = integrate_with_breaks([&](double t) { return (1.0 - d.cdf(t)) * sol.attention(t); }, sol.t0,
                                           1.0, breaks, 256);
  return std::abs(welfare_report(sol).ps_per_firm - rhs);
}

TransferSplit virtual_value_transfer(const EquilibriumSolution& sol) {
  const TypeDistribution& d = sol.distribution;
  TransferSplit out;
  if (sol.branch) {
    const SeparatingBranch& br = *sol.branch;
    out.separating = integrate_with_breaks(
        [&](double t) { return d.virtual_value(t) * br.attention(t) * d.density(t); }, sol.t0, sol.t_upper,
        d.breakpoints(), 256);
  }
  if (sol.pooling_active) out.pooling = sol.t_upper * sol.pool_attention * (1.0 - d.cdf(sol.t_upper));
  return out;
}

double transfer_virtual_value_check(const EquilibriumSolution& sol) {
  const TransferSplit split = virtual_value_transfer(sol);
  return std::abs(welfare_report(sol).phi - (split.separating + split.pooling));
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "price" || name == "p") return SweepAxis::price;
  if (name == "cost" || name == "c") return SweepAxis::cost;
  if (name == "firms" || name == "n") return SweepAxis::firms;
  throw InvalidParams("unknown sweep axis '" + name + "' (expected price, cost or firms)");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::price:
      return "price";
    case SweepAxis::cost:
      return "cost";
    case SweepAxis::firms:
      return "firms";
  }
  return "price";
}

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::increasing:
      return "increasing";
    case Direction::decreasing:
      return "decreasing";
    case Direction::none:
      return "none";
  }
  return "none";
}

bool SweepResult::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const MonotoneVerdict& v) { return v.holds; }) &&
         std::all_of(points.begin(), points.end(), [](const SweepPoint& p) { return p.ok; });
}

const MonotoneVerdict& SweepResult::verdict(const std::string& quantity) const {
  for (const auto& v : verdicts)
    if (v.quantity == quantity) return v;
  throw std::out_of_range("no verdict for " + quantity);
}

namespace {

Direction strict_direction(const std::vector<double>& xs) {
  if (xs.size() < 2) return Direction::none;
  bool inc = true;
  bool dec = true;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    inc = inc && xs[i] > xs[i - 1];
    dec = dec && xs[i] < xs[i - 1];
  }
  return inc ? Direction::increasing : dec ? Direction::decreasing : Direction::none;
}

}  // namespace

SweepResult comparative_statics_sweep(const MarketParams& base, const TypeDistribution& d, SweepAxis axis,
                                      const std::vector<double>& grid, unsigned workers) {
  SweepResult res;
  res.axis = axis;
  res.points.resize(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    SweepPoint& pt = res.points[i];
    pt.value = grid[i];
    pt.params = base;
    switch (axis) {
      case SweepAxis::price:
        pt.params.p = grid[i];
        break;
      case SweepAxis::cost:
        pt.params.c = grid[i];
        break;
      case SweepAxis::firms:
        pt.params.n = static_cast<int>(std::lround(grid[i]));
        break;
    }
    try {
      const EquilibriumSolution sol = solve_reasonable_equilibrium(pt.params, d);
      pt.t_lower = sol.t_lower;
      pt.t_upper = sol.t_upper;
      pt.pooling_active = sol.pooling_active;
      pt.welfare = welfare_report(sol);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  });

  const bool firms = axis == SweepAxis::firms;
  const Direction down = Direction::decreasing;
  const Direction up = Direction::increasing;
  struct Spec {
    const char* name;
    Direction expected;
    double (*get)(const SweepPoint&);
  };
  // On the firm axis the per-firm inspection probability falls while total
  // inspections rise; only the latter carries a directional claim there.
  const Spec specs[] = {
      {"Q", firms ? Direction::none : down, [](const SweepPoint& p) { return p.welfare.Q; }},
      {"total_inspections", firms ? up : down, [](const SweepPoint& p) { return p.welfare.total_inspections; }},
      {"m", firms ? up : down, [](const SweepPoint& p) { return p.welfare.m; }},
      {"CS", firms ? up : down, [](const SweepPoint& p) { return p.welfare.CS; }},
      {"PS", firms ? Direction::none : down, [](const SweepPoint& p) { return p.welfare.PS; }},
      {"PS_per_firm", down, [](const SweepPoint& p) { return p.welfare.ps_per_firm; }},
      {"W", Direction::none, [](const SweepPoint& p) { return p.welfare.W; }},
      {"t_upper", Direction::none, [](const SweepPoint& p) { return p.t_upper; }},
  };
  for (const Spec& s : specs) {
    MonotoneVerdict v;
    v.quantity = s.name;
    v.expected = s.expected;
    for (const SweepPoint& p : res.points)
      if (p.ok) v.sequence.push_back(s.get(p));
    v.observed = strict_direction(v.sequence);
    v.holds = v.expected == Direction::none || v.observed == v.expected;
    res.verdicts.push_back(std::move(v));
  }
  return res;
}

std::vector<double> default_sweep_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::price:
      return {0.6, 0.8, 1.0, 1.2, 1.4};
    case SweepAxis::cost:
      return {0.3, 0.4, 0.5, 0.6, 0.7};
    case SweepAxis::firms:
      return {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  }
  return {};
}

}  // namespace sisearch
