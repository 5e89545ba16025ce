#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "afmass/cli.hpp"
#include "afmass/error.hpp"
#include "afmass/mass.hpp"

using namespace afmass;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("afmass_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_tool(const std::string& sub, const fs::path& config, const fs::path& out, const std::string& extra = "") {
  const std::string cmd = std::string(AFMASS_CLI_PATH) + " " + sub + " --config " + config.string() +
                          " --out " + out.string() + " " + extra + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kSchwarzschild =
    R"({"metric": {"n": 3, "family": "schwarzschild", "params": {"m": 1.0}}, "radii": [50, 100, 200, 400]})";

}  // namespace

TEST_CASE("adm-mass through the binary is deterministic") {
  const fs::path dir = scratch("det");
  write(dir / "cfg.json", kSchwarzschild);
  REQUIRE(run_tool("adm-mass", dir / "cfg.json", dir / "a", "--quadrature 8") == 0);
  REQUIRE(run_tool("adm-mass", dir / "cfg.json", dir / "b", "--quadrature 8 --threads 2") == 0);
  nlohmann::json a = read_report((dir / "a" / "adm-mass.json").string());
  nlohmann::json b = read_report((dir / "b" / "adm-mass.json").string());
  CHECK(a.contains("timestamp"));
  a.erase("timestamp");
  b.erase("timestamp");
  CHECK(a == b);
  CHECK(a["tool_version"] == kToolVersion);
  CHECK(a["quadrature"] == 8);
  const MassEstimate m = mass_estimate_from_json(a["result"]);
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("reports round trip exactly") {
  const fs::path dir = scratch("rt");
  RunConfig cfg;
  cfg.command = "adm-mass";
  cfg.document = nlohmann::json::parse(kSchwarzschild);
  cfg.out_dir = dir.string();
  cfg.quadrature = 6;
  const RunResult r = run(cfg);
  REQUIRE(r.exit_code == 0);
  const nlohmann::json back = read_report(r.written.front());
  CHECK(back == r.report);
  CHECK(mass_estimate_from_json(back["result"]) == mass_estimate_from_json(r.report["result"]));
}

TEST_CASE("config errors exit with 2") {
  const fs::path dir = scratch("cfg");
  write(dir / "empty.json", R"({"metric": {"n": 3, "family": "schwarzschild", "params": {"m": 1}}, "radii": []})");
  CHECK(run_tool("adm-mass", dir / "empty.json", dir / "o1") == 2);
  CHECK(fs::exists(dir / "o1" / "error.json"));
  const nlohmann::json err = read_report((dir / "o1" / "error.json").string());
  CHECK(err["error"]["kind"] == "ConfigInvalid");

  write(dir / "bad.json", "{\"metric\": ");
  CHECK(run_tool("adm-mass", dir / "bad.json", dir / "o2") == 2);
  CHECK(run_tool("adm-mass", dir / "missing.json", dir / "o3") != 0);
  write(dir / "fam.json", R"({"metric": {"n": 3, "family": "kerr"}, "radii": [1, 2, 3]})");
  CHECK(run_tool("adm-mass", dir / "fam.json", dir / "o4") == 2);
}

TEST_CASE("computation errors exit with 1") {
  const fs::path dir = scratch("comp");
  write(dir / "inside.json",
        R"({"metric": {"n": 3, "family": "schwarzschild", "params": {"m": 1}}, "radii": [0.1, 0.2, 0.3]})");
  CHECK(run_tool("adm-mass", dir / "inside.json", dir / "o") == 1);
  const nlohmann::json err = read_report((dir / "o" / "error.json").string());
  CHECK(err["error"]["kind"] == "SingularPoint");
}

TEST_CASE("other commands write their files") {
  const fs::path dir = scratch("cmds");
  RunConfig cfg;
  cfg.out_dir = dir.string();
  cfg.quadrature = 8;

  cfg.command = "fg-profile";
  cfg.document = nlohmann::json::parse(kSchwarzschild);
  RunResult r = run(cfg);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "fg-profile.csv"));

  cfg.command = "cone-angle";
  cfg.document = {{"alpha", 0.5}};
  r = run(cfg);
  REQUIRE(r.exit_code == 0);
  CHECK(r.report["result"]["value"].get<double>() == doctest::Approx(0.5).epsilon(1e-10));

  cfg.command = "sequence";
  cfg.document = {{"kind", "constant"}, {"n", 3}, {"indices", {1, 2, 3}}};
  r = run(cfg);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "sequence.csv"));

  cfg.command = "weighted-mass";
  cfg.document = {{"shells", {{"n", 3}, {"indices", {1, 2}}}}, {"radii", {100, 200, 400, 800}}};
  r = run(cfg);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "weighted-mass.csv"));

  cfg.command = "launch";
  CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  setenv("AFMASS_THREADS", "2", 1);
  CHECK(resolve_threads(std::nullopt) == 2);
  unsetenv("AFMASS_THREADS");
  CHECK(resolve_threads(std::nullopt) == 1);
}
