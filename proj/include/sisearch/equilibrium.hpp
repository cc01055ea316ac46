#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "sisearch/branch.hpp"
#include "sisearch/distribution.hpp"
#include "sisearch/market.hpp"
#include "sisearch/schedule.hpp"

namespace sisearch {

struct LowerCutoff {
  double t;  ///< participation cutoff p c / (1 + u p)
  double s;  ///< subsidy of the marginal participant, t / p (0 at p = 0)
};

LowerCutoff lower_cutoff(const MarketParams& params);

/// Separating subsidy at t for the branch anchored at t0, integrating the
/// attention directly (no tabulated branch).
double sigma_sep(double t, double t0, const MarketParams& params, const TypeDistribution& d);

/// q_pool(x) (x - p c) - int_{t0}^x q_sep: the pooled minus the separating payoff at x.
double boundary_gap(double x, const SeparatingBranch& branch);
double boundary_gap(double x, double t0, const MarketParams& params, const TypeDistribution& d);

struct UpperCutoff {
  double t1 = 1.0;
  bool pooling_active = false;
  std::optional<double> t_cap;  ///< where the uncapped branch reaches c
};

UpperCutoff upper_cutoff(const SeparatingBranch& branch);
UpperCutoff upper_cutoff(double t0, const MarketParams& params, const TypeDistribution& d);

struct EquilibriumSolution {
  MarketParams params;
  TypeDistribution distribution;
  SubsidySchedule schedule;
  double t_lower = 0.0;
  double s_lower = 0.0;
  double t0 = 0.0;  ///< anchor of the schedule; equals t_lower in the reasonable equilibrium
  double t_upper = 1.0;
  std::optional<double> t_cap;
  double pool_attention = 1.0;  ///< q_pool(t_upper) when pooling, 1 otherwise
  bool pooling_active = false;
  std::map<std::string, double> diagnostics;
  /// Null when no type separates (p = 0, or the anchor already sits at the cap).
  std::shared_ptr<const SeparatingBranch> branch;

  /// Equilibrium inspection probability of type t.
  double attention(double t) const;
  double subsidy(double t) const { return schedule(t); }
  /// Consumer's posterior match probability for a firm at the cap.
  double pooled_posterior() const;
};

EquilibriumSolution solve_reasonable_equilibrium(const MarketParams& params, const TypeDistribution& d);

/// Member of the step / increasing / step family anchored at t0 in [t_lower, min(p c, 1)].
EquilibriumSolution sis_schedule(double t0, const MarketParams& params, const TypeDistribution& d);

/// Largest gain any type on a `type_grid`-point grid gets from a deviation drawn
/// from `deviation_grid` on-path separating subsidies plus 0, c and off-path gaps.
double check_incentive_compatibility(const EquilibriumSolution& sol, std::size_t type_grid = 500,
                                     std::size_t deviation_grid = 500);

/// max |q(t) (t - p sigma(t)) - int_{t0}^t q| over `points` types of the separating
/// branch, with sigma from the stored schedule and the integral from an adaptive
/// Gauss-Kronrod rule.
double envelope_residual(const EquilibriumSolution& sol, std::size_t points = 200);

}  // namespace sisearch
