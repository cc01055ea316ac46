#include "sisearch/search.hpp"

#include <algorithm>
#include <cmath>

#include "sisearch/attention.hpp"
#include "sisearch/errors.hpp"
#include "sisearch/parallel.hpp"
#include "sisearch/quadrature.hpp"

namespace sisearch {

std::mt19937_64 replication_engine(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(replication >> 32)};
  return std::mt19937_64(seq);
}

std::vector<int> dsir_order(std::span<const double> subsidies, std::span<const double> posteriors,
                            const MarketParams& params, std::mt19937_64& rng) {
  if (subsidies.size() != posteriors.size()) throw DomainError("dsir_order: subsidies and posteriors differ in length");
  struct Entry {
    int firm;
    ReservationIndex index;
  };
  std::vector<Entry> entries;
  entries.reserve(subsidies.size());
  for (std::size_t j = 0; j < subsidies.size(); ++j) {
    const ReservationIndex r = reservation_index(posteriors[j], params.c - subsidies[j], params.u);
    if (r.beats_outside_option()) entries.push_back({static_cast<int>(j), r});
  }
  // A uniform shuffle followed by a stable sort leaves every group of equal
  // indices in uniformly random relative order.
  std::shuffle(entries.begin(), entries.end(), rng);
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.index > b.index; });
  std::vector<int> plan;
  plan.reserve(entries.size());
  for (const Entry& e : entries) plan.push_back(e.firm);
  return plan;
}

double plan_value(std::span<const int> plan, std::span<const double> subsidies, std::span<const double> posteriors,
                  const MarketParams& params) {
  double reach = 1.0;
  double value = 0.0;
  for (int j : plan) {
    value += reach * (params.u * posteriors[j] - (params.c - subsidies[j]));
    reach *= 1.0 - posteriors[j];
  }
  return value;
}

BruteForceResult brute_force_consumer_value(std::span<const double> subsidies, std::span<const double> posteriors,
                                            const MarketParams& params) {
  const std::size_t n = subsidies.size();
  if (n != posteriors.size()) throw DomainError("brute force: subsidies and posteriors differ in length");
  if (n > 8) throw SizeError("brute-force consumer search enumerates at most 8 firms");

  BruteForceResult best;  // the empty plan (take the outside option) is worth 0
  std::vector<int> prefix;
  std::vector<bool> used(n, false);
  auto dfs = [&](auto&& self, double reach, double value) -> void {
    if (value > best.value) {
      best.value = value;
      best.plan = prefix;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = true;
      prefix.push_back(static_cast<int>(j));
      self(self, reach * (1.0 - posteriors[j]),
           value + reach * (params.u * posteriors[j] - (params.c - subsidies[j])));
      prefix.pop_back();
      used[j] = false;
    }
  };
  dfs(dfs, 1.0, 0.0);
  return best;
}

SearchOutcome run_search(std::span<const int> plan, const std::vector<bool>& matches,
                         std::span<const double> subsidies, const MarketParams& params) {
  SearchOutcome out;
  for (int j : plan) {
    out.inspected.push_back(j);
    out.consumer_net_cost += params.c - subsidies[j];
    out.transfers_paid.emplace_back(j, params.p * subsidies[j]);
    if (matches[static_cast<std::size_t>(j)]) {
      out.matched_firm = j;
      break;
    }
  }
  return out;
}

double on_path_posterior(const EquilibriumSolution& sol, double t) {
  const TypeDistribution& d = sol.distribution;
  if (t < sol.t0) {
    const double below = d.cdf(sol.t0);
    return below > 0.0 ? (d.mean() - d.partial_moment(sol.t0)) / below : 0.0;
  }
  if (sol.pooling_active && t >= sol.t_upper) return sol.pooled_posterior();
  // A single firm's branch is flat, so its subsidy reveals only t >= t0.
  if (sol.params.n == 1) return d.truncated_mean(sol.t0);
  return sol.schedule.inverse(sol.subsidy(t));
}

namespace {

constexpr std::uint64_t kChunk = 4096;

struct Tally {
  std::vector<std::uint64_t> type_draws;
  std::vector<std::uint64_t> type_hits;
  std::vector<std::uint64_t> subsidy_draws;
  std::vector<std::uint64_t> subsidy_hits;
  std::uint64_t matches = 0;
  std::uint64_t after_match = 0;
  double cost_sum = 0.0;
  double cost_sq = 0.0;
  double transfer_sum = 0.0;
  double transfer_sq = 0.0;

  Tally(std::size_t type_bins, std::size_t subsidy_bins)
      : type_draws(type_bins), type_hits(type_bins), subsidy_draws(subsidy_bins), subsidy_hits(subsidy_bins) {}

  void merge(const Tally& o) {
    for (std::size_t i = 0; i < type_draws.size(); ++i) {
      type_draws[i] += o.type_draws[i];
      type_hits[i] += o.type_hits[i];
    }
    for (std::size_t i = 0; i < subsidy_draws.size(); ++i) {
      subsidy_draws[i] += o.subsidy_draws[i];
      subsidy_hits[i] += o.subsidy_hits[i];
    }
    matches += o.matches;
    after_match += o.after_match;
    cost_sum += o.cost_sum;
    cost_sq += o.cost_sq;
    transfer_sum += o.transfer_sum;
    transfer_sq += o.transfer_sq;
  }
};

// Edges: [0] the zero subsidy, separating bins over [s_lo, s_hi], then the cap.
struct SubsidyBinning {
  double s_lo = 0.0;
  double s_hi = 0.0;
  std::size_t separating = 0;
  bool pooling = false;
  double cap = 0.0;

  std::size_t size() const { return 1 + separating + (pooling ? 1 : 0); }
  std::size_t bin(double s) const {
    if (s <= 0.0) return 0;
    if (pooling && s >= cap) return size() - 1;
    if (separating == 0) return 0;
    const double width = s_hi - s_lo;
    std::size_t k = width > 0.0 ? static_cast<std::size_t>((s - s_lo) / width * static_cast<double>(separating)) : 0;
    return 1 + std::min(k, separating - 1);
  }
};

}  // namespace

SimulationReport simulate_market(const EquilibriumSolution& sol, const SimulationOptions& options) {
  if (options.replications < 1) throw InvalidParams("simulation needs at least one replication");
  if (options.type_bins < 1) throw InvalidParams("simulation needs at least one type bin");
  const MarketParams& params = sol.params;
  const TypeDistribution& d = sol.distribution;
  const int n = params.n;
  const std::size_t type_bins = options.type_bins;

  SubsidyBinning sbin;
  sbin.pooling = sol.pooling_active;
  sbin.cap = params.c;
  if (sol.schedule.has_separating_branch()) {
    sbin.s_lo = sol.schedule.grid_sigma().front();
    sbin.s_hi = sol.schedule.grid_sigma().back();
    sbin.separating = std::max<std::size_t>(options.subsidy_bins, 1);
  }

  const std::uint64_t reps = options.replications;
  const std::uint64_t chunks = (reps + kChunk - 1) / kChunk;
  std::vector<Tally> partial(chunks, Tally(type_bins, sbin.size()));

  auto run_chunk = [&](std::size_t chunk) {
    Tally& tally = partial[chunk];
    std::vector<double> types(n), subsidies(n), posteriors(n);
    std::vector<bool> matches(n);
    std::vector<std::size_t> tbin(n), sb(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::uint64_t end = std::min(reps, (chunk + 1) * kChunk);
    for (std::uint64_t rep = chunk * kChunk; rep < end; ++rep) {
      std::mt19937_64 rng = replication_engine(options.seed, rep);
      for (int j = 0; j < n; ++j) {
        const double t = d.quantile(unit(rng));
        types[j] = t;
        subsidies[j] = sol.subsidy(t);
        posteriors[j] = on_path_posterior(sol, t);
        matches[j] = unit(rng) < t;
        tbin[j] = std::min(static_cast<std::size_t>(t * static_cast<double>(type_bins)), type_bins - 1);
        sb[j] = sbin.bin(subsidies[j]);
        ++tally.type_draws[tbin[j]];
        ++tally.subsidy_draws[sb[j]];
      }
      const std::vector<int> plan = dsir_order(subsidies, posteriors, params, rng);
      const SearchOutcome out = run_search(plan, matches, subsidies, params);
      for (int j : out.inspected) {
        ++tally.type_hits[tbin[j]];
        ++tally.subsidy_hits[sb[j]];
      }
      if (out.matched_firm) {
        ++tally.matches;
        if (out.inspected.back() != *out.matched_firm) ++tally.after_match;
      }
      double transfers = 0.0;
      for (const auto& tp : out.transfers_paid) transfers += tp.second;
      transfers /= n;
      tally.cost_sum += out.consumer_net_cost;
      tally.cost_sq += out.consumer_net_cost * out.consumer_net_cost;
      tally.transfer_sum += transfers;
      tally.transfer_sq += transfers * transfers;
    }
  };

  parallel_for(chunks, options.workers, run_chunk);

  Tally total(type_bins, sbin.size());
  for (const Tally& t : partial) total.merge(t);

  SimulationReport rep;
  rep.replications = reps;
  rep.rng_seed = options.seed;
  rep.inspections_after_match = total.after_match;
  const double R = static_cast<double>(reps);

  // Bin averages are taken in probability space, q(F^-1(v)) dv, which stays
  // accurate where the density is unbounded at an end of the support.
  std::vector<double> breaks;
  for (double b : d.breakpoints()) breaks.push_back(d.cdf(b));
  breaks.push_back(d.cdf(sol.t0));
  breaks.push_back(d.cdf(sol.t_upper));
  const auto in_quantile = [&](double v) { return sol.attention(d.quantile(v)); };
  for (std::size_t b = 0; b < type_bins; ++b) {
    AttentionBin bin;
    bin.lo = static_cast<double>(b) / static_cast<double>(type_bins);
    bin.hi = b + 1 == type_bins ? 1.0 : static_cast<double>(b + 1) / static_cast<double>(type_bins);
    bin.draws = total.type_draws[b];
    bin.inspected = total.type_hits[b];
    const double mass = d.cdf(bin.hi) - d.cdf(bin.lo);
    bin.closed_form =
        mass > 0.0 ? integrate_with_breaks(in_quantile, d.cdf(bin.lo), d.cdf(bin.hi), breaks, 8) / mass : 0.0;
    if (bin.draws > 0) {
      const double f = static_cast<double>(bin.inspected) / static_cast<double>(bin.draws);
      bin.empirical = f;
      bin.std_error = std::sqrt(f * (1.0 - f) / static_cast<double>(bin.draws));
    }
    rep.attention_by_type_bin.push_back(bin);
  }

  for (std::size_t b = 0; b < sbin.size(); ++b) {
    SubsidyBin bin;
    if (b == 0) {
      bin.lo = bin.hi = 0.0;
    } else if (sbin.pooling && b + 1 == sbin.size()) {
      bin.lo = bin.hi = sbin.cap;
    } else {
      const double w = (sbin.s_hi - sbin.s_lo) / static_cast<double>(sbin.separating);
      bin.lo = sbin.s_lo + w * static_cast<double>(b - 1);
      bin.hi = sbin.s_lo + w * static_cast<double>(b);
    }
    bin.draws = total.subsidy_draws[b];
    bin.inspected = total.subsidy_hits[b];
    if (bin.draws > 0) {
      const double f = static_cast<double>(bin.inspected) / static_cast<double>(bin.draws);
      bin.empirical = f;
      bin.std_error = std::sqrt(f * (1.0 - f) / static_cast<double>(bin.draws));
    }
    rep.subsidy_bins.push_back(bin);
  }

  const double m = static_cast<double>(total.matches) / R;
  rep.match_rate = {m, std::sqrt(m * (1.0 - m) / R)};
  rep.match_rate_closed_form = 1.0 - std::pow(1.0 - d.partial_moment(sol.t0), n);
  auto moment = [R](double sum, double sq) {
    const double mean = sum / R;
    const double var = R > 1.0 ? std::max(0.0, (sq - R * mean * mean) / (R - 1.0)) : 0.0;
    return Estimate{mean, std::sqrt(var / R)};
  };
  rep.mean_consumer_cost = moment(total.cost_sum, total.cost_sq);
  rep.mean_transfer_per_firm = moment(total.transfer_sum, total.transfer_sq);
  return rep;
}

}  // namespace sisearch
