#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sisearch/equilibrium.hpp"
#include "sisearch/errors.hpp"
#include "sisearch/platform.hpp"
#include "sisearch/search.hpp"
#include "sisearch/verification.hpp"
#include "sisearch/welfare.hpp"

namespace sisearch::cli {

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> dist;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> knots;
  std::optional<int> n;
  std::optional<double> c;
  std::optional<double> p;
  std::optional<double> u;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replications;
  std::optional<std::string> output_dir;
  std::optional<unsigned> workers;
  std::optional<std::string> format;
  std::optional<std::string> axis;
  std::optional<std::string> grid;
  std::optional<double> p_lo;
  std::optional<double> p_hi;
  std::optional<std::size_t> coarse_grid;
  std::optional<std::size_t> bins;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + " is empty");
  return out;
}

// "t:F,t:F,..." into [[t, F], ...].
Json parse_knots(const std::string& text) {
  Json knots = Json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("knot '" + item + "' is not of the form t:F");
    const auto t = parse_list(item.substr(0, colon), "knot");
    const auto F = parse_list(item.substr(colon + 1), "knot");
    knots.push_back({t.at(0), F.at(0)});
  }
  return knots;
}

Format parse_format(const std::string& s) {
  if (s == "all") return Format::all;
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw ConfigError("unknown format '" + s + "' (expected all, json or csv)");
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
}

void apply_file(const Json& j, RunConfig& cfg, Json& dist) {
  static const char* known[] = {"params", "distribution", "seed",  "replications", "output_dir",  "workers",
                                "format", "axis",         "grid",  "p_lo",         "p_hi",        "coarse_grid",
                                "bins"};
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    if (j.contains("params")) {
      const Json& pr = j.at("params");
      for (const auto& [key, value] : pr.items())
        if (key != "n" && key != "c" && key != "p" && key != "u") throw ConfigError("unknown params key '" + key + "'");
      if (pr.contains("n")) cfg.params.n = pr.at("n").get<int>();
      if (pr.contains("c")) cfg.params.c = pr.at("c").get<double>();
      if (pr.contains("p")) cfg.params.p = pr.at("p").get<double>();
      if (pr.contains("u")) cfg.params.u = pr.at("u").get<double>();
    }
    if (j.contains("distribution")) dist = j.at("distribution");
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("replications")) cfg.replications = j.at("replications").get<std::uint64_t>();
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<unsigned>();
    if (j.contains("format")) cfg.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("axis")) cfg.axis = j.at("axis").get<std::string>();
    if (j.contains("grid")) cfg.grid = j.at("grid").get<std::vector<double>>();
    if (j.contains("p_lo")) cfg.p_lo = j.at("p_lo").get<double>();
    if (j.contains("p_hi")) cfg.p_hi = j.at("p_hi").get<double>();
    if (j.contains("coarse_grid")) cfg.coarse_grid = j.at("coarse_grid").get<std::size_t>();
    if (j.contains("bins")) cfg.bins = j.at("bins").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override its entries");
  app.add_option("--dist", f.dist, "prior over types: uniform, beta or piecewise");
  app.add_option("--alpha", f.alpha, "first beta shape parameter");
  app.add_option("--beta", f.beta, "second beta shape parameter");
  app.add_option("--knots", f.knots, "piecewise CDF knots as t:F,t:F,... from 0:0 to 1:1");
  app.add_option("--n", f.n, "number of firms");
  app.add_option("--c", f.c, "inspection cost");
  app.add_option("--p", f.p, "token price");
  app.add_option("--u", f.u, "consumer's match benefit");
  app.add_option("--seed", f.seed, "simulation seed");
  app.add_option("--replications", f.replications, "simulated markets");
  app.add_option("--output-dir", f.output_dir, "artifact directory (default $SISEARCH_OUTPUT_DIR or .)");
  app.add_option("--workers", f.workers, "worker threads, 0 for all cores");
  app.add_option("--format", f.format, "all, json or csv");
  app.add_option("--axis", f.axis, "sweep axis: price, cost or firms");
  app.add_option("--grid", f.grid, "comma-separated sweep values");
  app.add_option("--p-lo", f.p_lo, "lower end of the price bracket");
  app.add_option("--p-hi", f.p_hi, "upper end of the price bracket");
  app.add_option("--coarse-grid", f.coarse_grid, "prices on the platform's coarse grid");
  app.add_option("--bins", f.bins, "type bins in the simulation report");
}

}  // namespace

RunConfig parse_config(int argc, const char* const* argv) {
  CLI::App app("Subsidized-inspection search market: equilibrium, simulation, welfare and platform pricing",
               "sisearch");
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  add_flags(app, f);
  struct Sub {
    const char* name;
    Command command;
    const char* help;
  };
  const Sub subs[] = {
      {"solve", Command::solve, "reasonable equilibrium and its subsidy schedule"},
      {"simulate", Command::simulate, "Monte Carlo markets under the equilibrium schedule"},
      {"welfare", Command::welfare, "consumer, producer and total surplus"},
      {"sweep", Command::sweep, "comparative statics along one parameter"},
      {"platform", Command::platform, "revenue-maximizing token price"},
      {"verify", Command::verify, "every model invariant at one parameter point"},
  };
  std::vector<std::pair<CLI::App*, Command>> handles;
  for (const Sub& s : subs) handles.emplace_back(app.add_subcommand(s.name, s.help), s.command);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  for (const auto& [sub, command] : handles)
    if (sub->parsed()) cfg.command = command;
  if (const char* env = std::getenv("SISEARCH_OUTPUT_DIR"); env && *env) cfg.output_dir = env;

  Json dist = {{"kind", "uniform"}};
  if (f.config) apply_file(read_config_file(*f.config), cfg, dist);

  if (f.dist) dist = Json{{"kind", *f.dist}};
  if (f.alpha) dist["alpha"] = *f.alpha;
  if (f.beta) dist["beta"] = *f.beta;
  if (f.knots) dist["knots"] = parse_knots(*f.knots);
  if (f.n) cfg.params.n = *f.n;
  if (f.c) cfg.params.c = *f.c;
  if (f.p) cfg.params.p = *f.p;
  if (f.u) cfg.params.u = *f.u;
  if (f.seed) cfg.seed = *f.seed;
  if (f.replications) cfg.replications = *f.replications;
  if (f.output_dir) cfg.output_dir = *f.output_dir;
  if (f.workers) cfg.workers = *f.workers;
  if (f.format) cfg.format = parse_format(*f.format);
  if (f.axis) cfg.axis = *f.axis;
  if (f.grid) cfg.grid = parse_list(*f.grid, "grid");
  if (f.p_lo) cfg.p_lo = *f.p_lo;
  if (f.p_hi) cfg.p_hi = *f.p_hi;
  if (f.coarse_grid) cfg.coarse_grid = *f.coarse_grid;
  if (f.bins) cfg.bins = *f.bins;

  try {
    if (dist.value("kind", "") == "beta" && (!dist.contains("alpha") || !dist.contains("beta")))
      throw ConfigError("beta prior needs --alpha and --beta");
    cfg.distribution = distribution_from_json(dist);
    cfg.params.validate();
    parse_axis(cfg.axis);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if ((cfg.command == Command::simulate || cfg.command == Command::verify) && cfg.replications < 1)
    throw ConfigError("replications must be at least 1");
  if (cfg.bins < 1) throw ConfigError("bins must be at least 1");
  if (cfg.coarse_grid < 2) throw ConfigError("coarse grid needs at least 2 prices");

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.output_dir))
    throw ConfigError("output directory " + cfg.output_dir.string() + " is not writable");
  return cfg;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_json(const RunConfig& cfg, const std::string& name, const Json& j) {
  if (cfg.format != Format::csv) write_file(cfg.output_dir / name, j.dump(2) + "\n");
}

void write_table(const RunConfig& cfg, const std::string& name, const std::string& text) {
  if (cfg.format != Format::json) write_file(cfg.output_dir / name, text);
}

SimulationOptions simulation_options(const RunConfig& cfg) {
  SimulationOptions opt;
  opt.replications = cfg.replications;
  opt.seed = cfg.seed;
  opt.workers = cfg.workers;
  opt.type_bins = cfg.bins;
  return opt;
}

std::string num(double x) { return format_number(x); }

int do_solve(const RunConfig& cfg, std::ostream& out) {
  const EquilibriumSolution sol = solve_reasonable_equilibrium(cfg.params, cfg.distribution);
  write_json(cfg, "equilibrium.json", to_json(sol));
  write_table(cfg, "schedule.dat", schedule_plot_data(sol));
  out << "t_lower " << num(sol.t_lower) << "\nt_upper " << num(sol.t_upper) << "\npooling_active "
      << (sol.pooling_active ? "true" : "false") << "\nt_cap " << (sol.t_cap ? num(*sol.t_cap) : "none") << '\n';
  return kExitOk;
}

int do_simulate(const RunConfig& cfg, std::ostream& out) {
  const EquilibriumSolution sol = solve_reasonable_equilibrium(cfg.params, cfg.distribution);
  const SimulationReport r = simulate_market(sol, simulation_options(cfg));
  write_json(cfg, "simulation.json", to_json(r));
  write_table(cfg, "attention_bins.csv", attention_bins_csv(r));
  out << "match_rate " << num(r.match_rate.mean) << " +- " << num(r.match_rate.std_error) << " (closed form "
      << num(r.match_rate_closed_form) << ")\nmax_attention_z " << num(max_attention_z(r))
      << "\ninspections_after_match " << r.inspections_after_match << '\n';
  return kExitOk;
}

int do_welfare(const RunConfig& cfg, std::ostream& out) {
  const EquilibriumSolution sol = solve_reasonable_equilibrium(cfg.params, cfg.distribution);
  const WelfareReport w = welfare_report(sol);
  write_json(cfg, "welfare.json", to_json(w));
  out << "Q " << num(w.Q) << "\nm " << num(w.m) << "\nC " << num(w.C) << "\nCS " << num(w.CS) << "\nPS "
      << num(w.PS) << "\nW " << num(w.W) << '\n';
  return kExitOk;
}

int do_sweep(const RunConfig& cfg, std::ostream& out) {
  const SweepAxis axis = parse_axis(cfg.axis);
  const std::vector<double> grid = cfg.grid.empty() ? default_sweep_grid(axis) : cfg.grid;
  const SweepResult r = comparative_statics_sweep(cfg.params, cfg.distribution, axis, grid, cfg.workers);
  const std::string stem = "sweep_" + axis_name(axis);
  write_json(cfg, stem + ".json", to_json(r));
  write_table(cfg, stem + ".csv", sweep_csv(r));
  for (const MonotoneVerdict& v : r.verdicts)
    out << v.quantity << " expected " << direction_name(v.expected) << " observed " << direction_name(v.observed)
        << (v.holds ? "" : "  VIOLATED") << '\n';
  for (const SweepPoint& p : r.points)
    if (!p.ok) out << "point " << num(p.value) << " failed: " << p.error << '\n';
  return kExitOk;
}

int do_platform(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  PriceBracket bracket = default_price_bracket(cfg.params);
  if (cfg.p_lo) bracket.lo = *cfg.p_lo;
  if (cfg.p_hi) bracket.hi = *cfg.p_hi;
  const PlatformResult r = optimize_price(cfg.params, cfg.distribution, bracket, cfg.coarse_grid, cfg.workers);
  write_json(cfg, "platform.json", to_json(r));
  write_table(cfg, "platform_sweep.csv", platform_sweep_csv(r));
  out << "p_star " << num(r.p_star) << "\nrevenue_star " << num(r.revenue_star) << "\nt_upper_star "
      << num(r.t_upper_star) << "\nt_psi " << num(r.t_psi) << "\ninterior " << (r.interior ? "true" : "false")
      << "\nexcess_search " << (r.excess_search ? "true" : "false") << '\n';
  for (const std::string& w : r.warnings) err << "warning: " << w << '\n';
  return kExitOk;
}

int do_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions opt;
  opt.simulation = simulation_options(cfg);
  const VerificationReport rep = verify_market(cfg.params, cfg.distribution, opt);
  Json checks = Json::array();
  for (const Check& c : rep.checks) {
    checks.push_back({{"name", c.name},
                      {"value", std::isfinite(c.value) ? Json(c.value) : Json(nullptr)},
                      {"threshold", c.threshold},
                      {"passed", c.passed},
                      {"detail", c.detail}});
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ' ' << num(c.value) << " <= " << num(c.threshold);
    if (!c.detail.empty()) out << "  [" << c.detail << ']';
    out << '\n';
  }
  write_json(cfg, "verification.json",
             {{"schema_version", kSchemaVersion},
              {"params", to_json(cfg.params)},
              {"distribution", to_json(cfg.distribution)},
              {"all_passed", rep.all_passed()},
              {"checks", checks}});
  return rep.all_passed() ? kExitOk : kExitVerify;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::solve:
      return do_solve(cfg, out);
    case Command::simulate:
      return do_simulate(cfg, out);
    case Command::welfare:
      return do_welfare(cfg, out);
    case Command::sweep:
      return do_sweep(cfg, out);
    case Command::platform:
      return do_platform(cfg, out, err);
    case Command::verify:
      return do_verify(cfg, out);
  }
  return kExitConfig;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "sisearch: configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    return run(cfg, out, err);
  } catch (const InvalidParams& e) {
    err << "sisearch: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "sisearch: solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace sisearch::cli
