#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "ooc/cli.hpp"
#include "ooc/scenario.hpp"
#include "ooc/trace_io.hpp"

using namespace ooc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ooc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ooc_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double summary_value(const fs::path& p, const std::string& key) {
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);)
    if (line.rfind(key + " = ", 0) == 0) return std::stod(line.substr(key.size() + 3));
  FAIL("missing summary key " << key);
  return 0;
}

const std::string kPaper = OOC_SOURCE_DIR "/scenarios/paper.json";

}  // namespace

TEST_CASE("paper-example writes trace, gains, summary and plot data") {
  const fs::path dir = scratch("paper");
  const Result r = cli({"paper-example", "--out", dir.string()});
  REQUIRE(r.code == 0);
  for (const char* f : {"trace.csv", "gains.txt", "summary.txt", "generator_z.csv", "generator_lambda.csv",
                        "outputs_y.csv"})
    CHECK(fs::exists(dir / f));
  CHECK(std::abs(summary_value(dir / "summary.txt", "terminal_mean_output") - 3.24) < 0.01);
  CHECK(summary_value(dir / "summary.txt", "window_max_spread") >
        summary_value(dir / "summary.txt", "pre_window_max_spread"));
  const auto rows = read_trace_csv(dir / "trace.csv");
  CHECK(rows.size() == 3001 * 4);
  double zmax = 0;
  for (const auto& row : rows)
    if (row.t >= 2700) zmax = std::max(zmax, std::abs(row.z - 3.24));
  CHECK(zmax < 1e-2);
  double ymax = 0;
  for (const auto& row : rows)
    if (row.t >= 1800 && row.t <= 2000) ymax = std::max(ymax, std::abs(row.e));
  CHECK(ymax < 0.05);
  fs::remove_all(dir);
}

TEST_CASE("run on the paper scenario") {
  const fs::path dir = scratch("run");
  Result r = cli({"run", "--scenario", kPaper, "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(std::abs(summary_value(dir / "summary.txt", "terminal_mean_output") - 3.24) < 0.01);
  const std::string gains = slurp(dir / "gains.txt");
  CHECK(gains.find("residual.disturbance_state") != std::string::npos);
  CHECK(gains.find("K1 (1x1) = [0.4345]") != std::string::npos);

  r = cli({"run", "--scenario", kPaper, "--out", dir.string(), "--horizon", "10"});
  REQUIRE(r.code == 0);
  CHECK(read_trace_csv(dir / "trace.csv").size() == 10 * 4 + 4);
  fs::remove_all(dir);
}

TEST_CASE("canonical dump re-parses to the same scenario") {
  const fs::path dir = scratch("dump");
  const Result r = cli({"synthesize", "--scenario", kPaper, "--override", "sim.horizon=123", "--dump-canonical",
                        (dir / "c.json").string()});
  REQUIRE(r.code == 0);
  ScenarioFile expect = paper_scenario();
  expect.horizon = 123;
  CHECK(parse_scenario(read_json_file(dir / "c.json")) == expect);
  fs::remove_all(dir);
}

TEST_CASE("synthesize prints the regulator, gains and checks") {
  const Result r = cli({"synthesize", "--scenario", kPaper});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("X1 (2x1) = [1; 0]") != std::string::npos);
  CHECK(r.out.find("U1 (1x1) = [0]") != std::string::npos);
  CHECK(r.out.find("A+BK.min_pivot") != std::string::npos);
  CHECK(r.out.find("composite.observable = yes") != std::string::npos);
  CHECK(r.out.find("warning: generator parameters") != std::string::npos);
}

TEST_CASE("assumption violations exit with 2") {
  const std::string unbalanced = "graph.weights=[[0,1,0,0],[0,0,1,0],[0,0,0,1],[0,0,0,0]]";
  const fs::path dir = scratch("bad");
  Result r = cli({"run", "--scenario", kPaper, "--out", dir.string(), "--override", unbalanced});
  CHECK(r.code == 2);
  CHECK(r.err.find("strongly connected and weight-balanced") != std::string::npos);

  r = cli({"synthesize", "--scenario", kPaper, "--override", "exosystem.E=[[0,0],[0,0]]"});
  CHECK(r.code == 2);
  CHECK(r.err.find("observab") != std::string::npos);

  r = cli({"synthesize", "--scenario", kPaper, "--override", "plant.C=[[0,0]]"});
  CHECK(r.code == 2);
  CHECK(r.err.find("set-point") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("divergence exits with 3") {
  const fs::path dir = scratch("div");
  const Result r = cli({"run", "--scenario", kPaper, "--out", dir.string(), "--override",
                        "generator={\"alpha\":1,\"beta\":15,\"gamma\":2}"});
  CHECK(r.code == 3);
  CHECK(r.err.find("Diverged") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"run", "--scenario", kPaper}).code == 1);
  CHECK(cli({"bogus"}).code == 1);
  CHECK(cli({"run", "--scenario", "/nonexistent.json", "--out", "/tmp"}).code == 1);
  CHECK(cli({"synthesize", "--scenario", kPaper, "--override", "sim.colour=1"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("installed binary maps exit codes") {
  const std::string bin = OOC_CLI_PATH;
  const fs::path dir = scratch("bin");
  auto run = [&](const std::string& args) {
    const int status = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("paper-example --out " + dir.string()) == 0);
  CHECK(run("synthesize --scenario " + kPaper + " --override 'plant.C=[[0,0]]'") == 2);
  CHECK(run("nonsense") == 1);
  fs::remove_all(dir);
}
