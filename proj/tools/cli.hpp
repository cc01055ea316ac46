#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sisearch/distribution.hpp"
#include "sisearch/market.hpp"
#include "sisearch/serialize.hpp"

namespace sisearch::cli {

enum class Command { solve, simulate, welfare, sweep, platform, verify };

enum class Format { all, json, csv };

struct RunConfig {
  Command command = Command::solve;
  MarketParams params;
  TypeDistribution distribution;
  std::uint64_t seed = 42;
  std::uint64_t replications = 100000;
  std::filesystem::path output_dir = ".";
  unsigned workers = 0;
  Format format = Format::all;
  std::string axis = "price";
  std::vector<double> grid;  ///< empty: the axis default
  std::optional<double> p_lo;
  std::optional<double> p_hi;
  std::size_t coarse_grid = 100;
  std::size_t bins = 50;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by parse_config for --help; carries the formatted usage text.
struct HelpRequested {
  std::string text;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitVerify = 4;

/// Throws ConfigError on anything malformed and HelpRequested for --help.
RunConfig parse_config(int argc, const char* const* argv);

/// Runs one command; returns the exit status. Summaries go to `out`,
/// diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run with the exit-code mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sisearch::cli
