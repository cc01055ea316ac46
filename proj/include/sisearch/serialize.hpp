#pragma once

#include <string>

#include <json.hpp>

#include "sisearch/distribution.hpp"
#include "sisearch/equilibrium.hpp"
#include "sisearch/market.hpp"
#include "sisearch/platform.hpp"
#include "sisearch/search.hpp"
#include "sisearch/welfare.hpp"

namespace sisearch {

using Json = nlohmann::ordered_json;

/// Bumped whenever a JSON field or CSV column changes meaning.
inline constexpr int kSchemaVersion = 1;

Json to_json(const MarketParams& params);
Json to_json(const TypeDistribution& d);
/// {"kind": "uniform"} | {"kind": "beta", "alpha", "beta"} | {"kind": "piecewise", "knots": [[t, F], ...]}.
/// Throws InvalidParams on anything else.
TypeDistribution distribution_from_json(const Json& j);

Json to_json(const EquilibriumSolution& sol);
Json to_json(const SimulationReport& r);
Json to_json(const WelfareReport& r);
Json to_json(const SweepResult& r);
Json to_json(const PlatformResult& r);

/// Shortest round-trip decimal form; identical across runs and thread counts.
std::string format_number(double x);

/// Two whitespace-separated columns (t, sigma) over [0, 1]. Each jump of the
/// schedule appears as two rows sharing the abscissa: the left value, then the
/// value taken at the jump.
std::string schedule_plot_data(const EquilibriumSolution& sol);

std::string attention_bins_csv(const SimulationReport& r);
std::string sweep_csv(const SweepResult& r);
std::string platform_sweep_csv(const PlatformResult& r);

}  // namespace sisearch
