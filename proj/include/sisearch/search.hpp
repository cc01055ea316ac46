#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "sisearch/equilibrium.hpp"
#include "sisearch/market.hpp"

namespace sisearch {

/// Per-replication engine: a fresh mt19937_64 seeded from (seed, replication) so
/// any replication can be regenerated on its own, in any order, on any thread.
std::mt19937_64 replication_engine(std::uint64_t seed, std::uint64_t replication);

/// Firms in descending reservation index, keeping only those that beat the
/// outside option; equal indices are put in uniformly random order.
std::vector<int> dsir_order(std::span<const double> subsidies, std::span<const double> posteriors,
                            const MarketParams& params, std::mt19937_64& rng);

/// Exact expected consumer utility of inspecting `plan` in order until the first match.
double plan_value(std::span<const int> plan, std::span<const double> subsidies, std::span<const double> posteriors,
                  const MarketParams& params);

struct BruteForceResult {
  double value = 0.0;
  std::vector<int> plan;
};

/// Best value over every ordered subset of firms (n <= 8).
BruteForceResult brute_force_consumer_value(std::span<const double> subsidies, std::span<const double> posteriors,
                                            const MarketParams& params);

struct SearchOutcome {
  std::vector<int> inspected;
  std::optional<int> matched_firm;
  double consumer_net_cost = 0.0;
  std::vector<std::pair<int, double>> transfers_paid;  ///< (firm, p s) per inspected firm
};

/// Walks `plan` against realized match indicators and stops at the first match.
SearchOutcome run_search(std::span<const int> plan, const std::vector<bool>& matches,
                         std::span<const double> subsidies, const MarketParams& params);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct AttentionBin {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t draws = 0;
  std::uint64_t inspected = 0;
  double empirical = 0.0;
  double closed_form = 0.0;  ///< prior-weighted bin average of the equilibrium attention
  double std_error = 0.0;
};

struct SubsidyBin {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t draws = 0;
  std::uint64_t inspected = 0;
  double empirical = 0.0;
  double std_error = 0.0;
};

struct SimulationReport {
  std::uint64_t replications = 0;
  std::uint64_t rng_seed = 0;
  std::vector<AttentionBin> attention_by_type_bin;
  std::vector<SubsidyBin> subsidy_bins;  ///< realized subsidies: below the entry level, separating bins, the cap
  Estimate match_rate;
  double match_rate_closed_form = 0.0;
  Estimate mean_consumer_cost;
  Estimate mean_transfer_per_firm;
  std::uint64_t inspections_after_match = 0;  ///< must stay zero
};

struct SimulationOptions {
  std::uint64_t replications = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 0;  ///< 0 picks the hardware concurrency
  std::size_t type_bins = 50;
  std::size_t subsidy_bins = 10;
};

/// Consumer posterior for a firm of realized type t under the solution's schedule.
double on_path_posterior(const EquilibriumSolution& sol, double t);

SimulationReport simulate_market(const EquilibriumSolution& sol, const SimulationOptions& options);

}  // namespace sisearch
