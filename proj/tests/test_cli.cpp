#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sisearch_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "sisearch");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = sisearch::cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sisearch::Json load(const fs::path& p) { return sisearch::Json::parse(slurp(p)); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve reports both pooling regimes") {
  const fs::path high = scratch("high");
  const fs::path base = scratch("base");
  CHECK(run_cli({"solve", "--dist", "uniform", "--n", "10", "--c", "0.5", "--p", "1.8", "--u", "1", "--output-dir",
                 high.string()}) == 0);
  CHECK(load(high / "equilibrium.json").at("pooling_active") == false);
  CHECK(run_cli({"solve", "--dist", "uniform", "--n", "10", "--c", "0.5", "--p", "1.0", "--u", "1", "--output-dir",
                 base.string()}) == 0);
  const auto j = load(base / "equilibrium.json");
  CHECK(j.at("pooling_active") == true);
  const std::string t1 = sisearch::format_number(j.at("t_upper").get<double>());
  const std::string plot = slurp(base / "schedule.dat");
  CHECK(plot.find(t1 + " 0.5\n") != std::string::npos);
}

TEST_CASE("identical configuration gives byte-identical artifacts") {
  const fs::path a = scratch("a");
  const fs::path b = scratch("b");
  CHECK(run_cli({"simulate", "--replications", "8000", "--seed", "7", "--workers", "1", "--output-dir", a.string()}) ==
        0);
  CHECK(run_cli({"simulate", "--replications", "8000", "--seed", "7", "--workers", "3", "--output-dir", b.string()}) ==
        0);
  for (const char* f : {"simulation.json", "attention_bins.csv"}) CHECK(slurp(a / f) == slurp(b / f));
  CHECK(run_cli({"sweep", "--axis", "cost", "--output-dir", a.string()}) == 0);
  CHECK(run_cli({"sweep", "--axis", "cost", "--workers", "2", "--output-dir", b.string()}) == 0);
  CHECK(slurp(a / "sweep_cost.csv") == slurp(b / "sweep_cost.csv"));
  CHECK(slurp(a / "sweep_cost.json") == slurp(b / "sweep_cost.json"));
}

TEST_CASE("flags override the config file") {
  const fs::path dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"params": {"n": 10, "c": 0.5, "p": 1.8}, "distribution": {"kind": "beta", "alpha": 2, "beta": 2},
               "format": "json"})";
  }
  CHECK(run_cli({"solve", "--config", (dir / "run.json").string(), "--output-dir", dir.string()}) == 0);
  auto j = load(dir / "equilibrium.json");
  CHECK(j.at("params").at("p") == 1.8);
  CHECK(j.at("distribution").at("kind") == "beta");
  CHECK_FALSE(fs::exists(dir / "schedule.dat"));
  CHECK(run_cli({"solve", "--config", (dir / "run.json").string(), "--p", "1", "--dist", "uniform", "--output-dir",
                 dir.string()}) == 0);
  j = load(dir / "equilibrium.json");
  CHECK(j.at("params").at("p") == 1.0);
  CHECK(j.at("distribution").at("kind") == "uniform");
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch("env");
  ::setenv("SISEARCH_OUTPUT_DIR", dir.string().c_str(), 1);
  const int rc = run_cli({"welfare"});
  ::unsetenv("SISEARCH_OUTPUT_DIR");
  CHECK(rc == 0);
  CHECK(fs::exists(dir / "welfare.json"));
}

TEST_CASE("platform writes the price sweep") {
  const fs::path dir = scratch("platform");
  CHECK(run_cli({"platform", "--p-lo", "0.5", "--p-hi", "1.5", "--coarse-grid", "6", "--output-dir", dir.string()}) ==
        0);
  const std::string csv = slurp(dir / "platform_sweep.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
  CHECK(load(dir / "platform.json").at("sweep").size() == 6);
}

TEST_CASE("configuration errors exit with 2") {
  const fs::path dir = scratch("errors");
  const std::string out = dir.string();
  CHECK(run_cli({"solve", "--bogus", "1"}) == 2);
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"solve", "welfare"}) == 2);
  CHECK(run_cli({"solve", "--n", "0", "--output-dir", out}) == 2);
  CHECK(run_cli({"solve", "--p", "5", "--c", "1.3", "--output-dir", out}) == 2);
  CHECK(run_cli({"solve", "--dist", "lognormal", "--output-dir", out}) == 2);
  CHECK(run_cli({"solve", "--dist", "beta", "--alpha", "2", "--output-dir", out}) == 2);
  CHECK(run_cli({"solve", "--dist", "piecewise", "--knots", "0:0,0.5,1:1", "--output-dir", out}) == 2);
  CHECK(run_cli({"solve", "--config", (dir / "missing.json").string()}) == 2);
  CHECK(run_cli({"simulate", "--replications", "0", "--output-dir", out}) == 2);
  CHECK(run_cli({"sweep", "--axis", "weather", "--output-dir", out}) == 2);
  CHECK(run_cli({"platform", "--p-lo", "2", "--p-hi", "1", "--output-dir", out}) == 2);
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"params\": {\"n\": 10,}";
  }
  CHECK(run_cli({"solve", "--config", (dir / "bad.json").string()}) == 2);
  {
    std::ofstream unknown(dir / "unknown.json");
    unknown << R"({"parms": {"n": 10}})";
  }
  CHECK(run_cli({"solve", "--config", (dir / "unknown.json").string()}) == 2);
  std::string help;
  CHECK(run_cli({"--help"}, &help) == 0);
  CHECK(help.find("verify") != std::string::npos);
}

TEST_CASE("a failure while producing results exits with 3") {
  const fs::path dir = scratch("blocked");
  fs::create_directories(dir / "equilibrium.json");  // a directory where the artifact should go
  CHECK(run_cli({"solve", "--output-dir", dir.string()}) == 3);
}

TEST_CASE("a violated invariant exits with 4") {
  // 200 markets spread over 100 type bins leave some bins far from their closed form.
  const fs::path dir = scratch("verify");
  CHECK(run_cli({"verify", "--replications", "200", "--bins", "100", "--seed", "2", "--output-dir", dir.string()}) == 4);
  CHECK(load(dir / "verification.json").at("all_passed") == false);
}

TEST_CASE("installed binary uses the same exit codes") {
  const char* bin = std::getenv("SISEARCH_BIN");
  if (!bin) return;
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const fs::path dir = scratch("binary");
  CHECK(status(std::string(bin) + " --help") == 0);
  CHECK(status(std::string(bin) + " solve --n 0 --output-dir " + dir.string()) == 2);
  CHECK(status(std::string(bin) + " solve --output-dir " + dir.string()) == 0);
}

}
