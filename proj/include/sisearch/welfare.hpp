#pragma once

#include <map>
#include <string>
#include <vector>

#include "sisearch/distribution.hpp"
#include "sisearch/equilibrium.hpp"
#include "sisearch/market.hpp"

namespace sisearch {

struct WelfareReport {
  double Q = 0.0;    ///< expected inspection probability of one firm
  double phi = 0.0;  ///< expected transfer p sigma q of one firm
  double m = 0.0;    ///< match probability
  double C = 0.0;    ///< consumer's expected net inspection cost per firm
  double CS = 0.0;
  double PS = 0.0;
  double W = 0.0;

  double total_inspections = 0.0;  ///< n Q
  double typed_attention = 0.0;    ///< E[t q(t)]
  double demand = 0.0;             ///< E[sigma q], from the stored schedule
  double ps_per_firm = 0.0;
  /// Residuals of cross-checks: W by the direct route, the match accounting
  /// m = n E[t q], and the closed total-welfare line that drops the u weight on m.
  std::map<std::string, double> diagnostics;
};

WelfareReport welfare_report(const EquilibriumSolution& sol);

/// |PS / n - int_{t0}^1 (1 - F) q| with the right side integrated independently.
double producer_surplus_identity_check(const EquilibriumSolution& sol);

/// Transfer per firm split as int psi q_sep f over the separating branch plus
/// t_upper q_pool (1 - F(t_upper)) from the pool.
struct TransferSplit {
  double separating = 0.0;
  double pooling = 0.0;
};

TransferSplit virtual_value_transfer(const EquilibriumSolution& sol);

/// |phi - (separating + pooling)| for the split above.
double transfer_virtual_value_check(const EquilibriumSolution& sol);

enum class SweepAxis { price, cost, firms };

SweepAxis parse_axis(const std::string& name);
std::string axis_name(SweepAxis axis);

enum class Direction { increasing, decreasing, none };
std::string direction_name(Direction d);

struct SweepPoint {
  double value = 0.0;
  bool ok = false;
  std::string error;
  MarketParams params;
  double t_lower = 0.0;
  double t_upper = 1.0;
  bool pooling_active = false;
  WelfareReport welfare;
};

struct MonotoneVerdict {
  std::string quantity;
  Direction expected = Direction::none;
  Direction observed = Direction::none;  ///< strict direction of the sampled sequence, none if mixed
  bool holds = true;                     ///< observed matches expected (always true when nothing is expected)
  std::vector<double> sequence;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::price;
  std::vector<SweepPoint> points;
  std::vector<MonotoneVerdict> verdicts;
  bool all_hold() const;
  const MonotoneVerdict& verdict(const std::string& quantity) const;
};

SweepResult comparative_statics_sweep(const MarketParams& base, const TypeDistribution& d, SweepAxis axis,
                                      const std::vector<double>& grid, unsigned workers = 0);

std::vector<double> default_sweep_grid(SweepAxis axis);

}  // namespace sisearch
