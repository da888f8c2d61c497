// SPDX-License-Identifier: BSD-3-Clause
//
// Command-line driver, run in-process: envelope shape, determinism of the
// JSON output, override plumbing, exit codes, and file emission.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../tools/cli_support.hpp"

using twophase::cli::run_cli;
using Json = nlohmann::ordered_json;

namespace {

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;

  Json json() const { return Json::parse(out); }
};

CliRun invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = run_cli(std::move(args), out, err);
  return {rc, out.str(), err.str()};
}

/// Strip the volatile metadata block so two runs can be compared bytewise.
std::string without_meta(const std::string& text) {
  Json doc = Json::parse(text);
  REQUIRE(doc.contains("meta"));
  REQUIRE(doc["meta"].contains("timestamp"));
  doc.erase("meta");
  return doc.dump(2);
}

}  // namespace

TEST_CASE("equilibrium run emits the documented envelope") {
  const CliRun r = invoke({"equilibrium"});
  REQUIRE(r.exit_code == 0);

  const Json doc = r.json();
  CHECK(doc["schema"] == 1);
  CHECK(doc["command"] == "equilibrium");
  // the full resolved configuration is embedded, not just the overrides
  CHECK(doc["config"]["material"]["rho2"] == 2.0);
  CHECK(doc["config"]["geometry"]["N"] == 24);
  CHECK(doc["config"]["run"]["seed"] == 2026);
  CHECK(doc["result"]["R"].get<double>() == Catch::Approx(1.0).epsilon(1e-10));
  CHECK(doc["result"]["theta"].get<double>() == Catch::Approx(1.0).epsilon(1e-10));
  CHECK(doc["result"]["manifold_dimension"] == 5);
  // stderr carries exactly one summary line
  CHECK(r.err.find("equilibrium:") == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("identical invocations produce byte-identical JSON modulo metadata") {
  const CliRun a = invoke({"equilibrium"});
  const CliRun b = invoke({"equilibrium"});
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(without_meta(a.out) == without_meta(b.out));
}

TEST_CASE("overrides map one-to-one onto configuration keys") {
  const CliRun space = invoke({"equilibrium", "--geometry.N", "128"});
  REQUIRE(space.exit_code == 0);
  CHECK(space.json()["config"]["geometry"]["N"] == 128);

  const CliRun equals = invoke({"equilibrium", "--geometry.N=128"});
  REQUIRE(equals.exit_code == 0);
  CHECK(equals.json()["config"]["geometry"]["N"] == 128);

  // shorthand flags write through to the same config field
  const CliRun shorthand = invoke({"entropy", "probe", "--m", "2"});
  REQUIRE(shorthand.exit_code == 0);
  CHECK(shorthand.json()["config"]["geometry"]["m"] == 2);
  CHECK(shorthand.json()["result"]["is_local_max"] == false);
}

TEST_CASE("usage and configuration errors exit with code 1") {
  CHECK(invoke({}).exit_code == 1);
  CHECK(invoke({"bogus"}).exit_code == 1);
  CHECK(invoke({"lopatinskii"}).exit_code == 1);
  CHECK(invoke({"equilibrium", "--geometry.bogus", "3"}).exit_code == 1);
  CHECK(invoke({"equilibrium", "--geometry.N", "4"}).exit_code == 1);
  CHECK(invoke({"equilibrium", "--nonsense", "5"}).exit_code == 1);
  CHECK(invoke({"equilibrium", "--config", "/no/such/file.cfg"}).exit_code == 1);
  // failures print a diagnostic, not a JSON document
  const CliRun r = invoke({"equilibrium", "--geometry.N", "4"});
  CHECK(r.out.empty());
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("help requests succeed and document the CSV columns") {
  const CliRun top = invoke({"--help"});
  CHECK(top.exit_code == 0);
  CHECK(top.out.find("--section.key") != std::string::npos);

  const CliRun sub = invoke({"spectrum", "compute", "--help"});
  CHECK(sub.exit_code == 0);
  CHECK(sub.out.find("CSV columns: l, lambda, dispersion") != std::string::npos);
}

TEST_CASE("certificate subcommand reports zero-freeness with exit 0") {
  const CliRun r = invoke({"lopatinskii", "certify", "--variant", "s22", "--rmax", "1e3"});
  REQUIRE(r.exit_code == 0);
  const Json doc = r.json();
  CHECK(doc["command"] == "lopatinskii certify");
  CHECK(doc["result"]["verdict"] == "zero_free");
  CHECK(doc["result"]["winding"] == 0);
  CHECK(doc["config"]["run"]["rmax"] == 1000.0);

  const CliRun bad = invoke({"lopatinskii", "certify", "--variant", "s99"});
  CHECK(bad.exit_code == 1);
}

TEST_CASE("spectrum run flags the disconnected instability and writes CSV") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string csv_path = (dir / "twophase_cli_test_dispersion.csv").string();
  const std::string json_path = (dir / "twophase_cli_test_spectrum.json").string();

  const CliRun r = invoke({"spectrum", "compute", "--m", "2", "--geometry.L_max", "2",
                           "--run.csv", csv_path, "--run.json", json_path});
  REQUIRE(r.exit_code == 0);

  const Json doc = r.json();
  CHECK(doc["result"]["positive_count"] == 1);
  CHECK(doc["result"]["kernel_dim"] == 8);
  CHECK(doc["result"]["semisimple"] == true);
  CHECK(doc["result"]["gates"]["grid_independent"] == true);
  CHECK(doc["result"]["gates"]["energy_residual_max"].get<double>() < 1e-6);
  CHECK(doc["result"]["per_l"].size() == 3);

  // the JSON file duplicates stdout; the CSV starts with the header row
  std::ifstream jf(json_path);
  std::stringstream jbuf;
  jbuf << jf.rdbuf();
  CHECK(jbuf.str() == r.out);
  std::ifstream cf(csv_path);
  std::string header;
  std::getline(cf, header);
  CHECK(header == "l,lambda,dispersion");

  std::filesystem::remove(csv_path);
  std::filesystem::remove(json_path);
}

TEST_CASE("config files load before overrides are applied") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string cfg_path = (dir / "twophase_cli_test.cfg").string();
  {
    std::ofstream f(cfg_path);
    f << "[geometry]\nN = 32\nL_max = 3\n";
  }
  const CliRun r = invoke({"equilibrium", "--config", cfg_path, "--geometry.L_max", "5"});
  REQUIRE(r.exit_code == 0);
  const Json doc = r.json();
  CHECK(doc["config"]["geometry"]["N"] == 32);        // from the file
  CHECK(doc["config"]["geometry"]["L_max"] == 5);     // flag wins over the file
  std::filesystem::remove(cfg_path);
}
