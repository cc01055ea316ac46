#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sisearch/distribution.hpp"
#include "sisearch/equilibrium.hpp"
#include "sisearch/market.hpp"
#include "sisearch/search.hpp"

namespace sisearch {

struct Check {
  std::string name;
  double value = 0.0;      ///< measured residual, gap or z-score
  double threshold = 0.0;  ///< passes when value <= threshold
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool all_passed() const;
};

struct VerifyOptions {
  SimulationOptions simulation;
  std::size_t ic_grid = 500;
  std::size_t search_instances = 500;
  int search_max_firms = 5;
  bool sweeps = true;
};

/// Largest |z| over type bins of the simulated inspection frequency against the
/// bin-averaged closed form, with the standard error taken under the closed form.
/// Bins whose closed form is 0 or 1 must match exactly (z is then 0 or infinite).
double max_attention_z(const SimulationReport& r);

/// |z| of the simulated match rate against 1 - (1 - PM(t0))^n.
double match_rate_z(const SimulationReport& r);

/// Largest |DSIR plan value - brute-force optimum| over random consumer problems
/// with 1..max_firms firms. A fifth of the firms copy an earlier firm's offer so
/// ties in the index are exercised.
double dsir_oracle_gap(std::size_t instances, int max_firms, std::uint64_t seed);

/// Largest relative gap between the scalar and dispatched kernels on random data.
double kernel_equivalence_gap(std::uint64_t seed);

/// Every invariant of the model at one parameter point.
VerificationReport verify_market(const MarketParams& params, const TypeDistribution& d, const VerifyOptions& options);

}  // namespace sisearch
