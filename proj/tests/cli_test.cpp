#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "emit.hpp"
#include "job.hpp"

using commsim_cli::ConfigError;
using commsim_cli::GridData;
using commsim_cli::JobConfig;
using commsim_cli::parse_config;
using commsim_cli::run_job;

namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  REQUIRE(file.good());
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("commsim_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("parse_config resolves the demo flags") {
  const JobConfig config = parse_config(
      {"damping-demo", "--omega", "-2", "--kappa", "1", "--phi", "0",
       "--delta-t", "0.1", "--output", "/tmp/demo_out"});
  CHECK(config.command == JobConfig::Command::DampingDemo);
  CHECK(config.omega == -2.0);
  CHECK(config.kappa == 1.0);
  CHECK(config.phi == 0.0);
  CHECK(config.delta_t == 0.1);
  CHECK(config.grid_res == 64);
  CHECK(config.format == "csv");
  CHECK_FALSE(config.sampled);
}

TEST_CASE("parse_config surfaces grammar errors with the offending token") {
  try {
    parse_config({"estimate", "-L", "1", "-H", "-0.5jq X0"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("-0.5jq") != std::string::npos);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }

  try {
    parse_config({"estimate", "-L", "1", "-H", "1.0 Z3"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("Z3") != std::string::npos);
  }
}

TEST_CASE("parse_config validates basic shape") {
  const JobConfig simple =
      parse_config({"estimate", "-L", "1", "-H", "1.0 Z0"});
  CHECK(simple.kind == JobConfig::EstimateKind::Commutator);
  CHECK(simple.hamiltonian_text == "1.0 Z0");

  CHECK_THROWS_AS(parse_config({"estimate", "-L", "1"}), ConfigError);
  CHECK_THROWS_AS(parse_config({"estimate", "-L", "0", "-H", "1.0 Z0"}),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config({"vn-scan", "-L", "1", "-H", "1.0 Z0"}),  // no grid
      ConfigError);
  CHECK_THROWS_AS(parse_config({"estimate", "-L", "1", "-H", "1.0 Z0",
                                "--psi0", "1.0,0.0,0.0,0.0"}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config({"bogus-command"}), ConfigError);
}

TEST_CASE("grid and literal helpers") {
  const auto grid = commsim_cli::parse_grid_spec("0:3:4");
  REQUIRE(grid.size() == 4);
  CHECK(grid[0] == 0.0);
  CHECK(grid[3] == 3.0);

  const auto listed = commsim_cli::parse_grid_spec("0.5,1.5,2");
  CHECK(listed.size() == 3);
  CHECK_THROWS_AS(commsim_cli::parse_grid_spec("1,1"), ConfigError);
  CHECK_THROWS_AS(commsim_cli::parse_grid_spec("2:1"), ConfigError);

  CHECK(commsim_cli::parse_complex_literal("0.5j") ==
        std::complex<double>(0.0, 0.5));
  CHECK(commsim_cli::parse_complex_literal("1-0.25j") ==
        std::complex<double>(1.0, -0.25));
  CHECK_THROWS_AS(commsim_cli::parse_complex_literal("j"), ConfigError);
}

TEST_CASE("grid emission formats") {
  GridData grid;
  grid.axis1_name = "theta";
  grid.axis2_name = "t";
  grid.axis1 = {0.0, 1.0};
  grid.axis2 = {0.0, 0.5};
  grid.values = {1.0, 2.0, 3.0, 1.0 / 3.0};

  const std::string csv = commsim_cli::grid_to_csv(grid);
  CHECK(csv.rfind("axis1,axis2,value\n", 0) == 0);
  CHECK(csv.find("0.33333333333333331") != std::string::npos);  // 17 digits

  SECTION("JSON round trip is bit exact") {
    const std::string json_text = commsim_cli::grid_to_json_text(
        grid, {{"tool", "commsim"}, {"mode", "exact"}});
    const auto parsed = nlohmann::json::parse(json_text);
    CHECK(parsed["meta"]["tool"] == "commsim");
    CHECK(parsed["axes"]["axis1"]["name"] == "theta");
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        const double back = parsed["values"][i][j].get<double>();
        CHECK(back == grid.values[i * 2 + j]);
      }
    }
  }

  SECTION("empty grids are refused") {
    GridData empty;
    CHECK_THROWS_AS(commsim_cli::grid_to_csv(empty), ConfigError);
    CHECK_THROWS_AS(commsim_cli::grid_to_json_text(empty, {}), ConfigError);
  }
}

TEST_CASE("estimate job writes the expected result") {
  const fs::path dir = temp_dir("estimate");
  const fs::path out = dir / "result.json";
  JobConfig config = parse_config(
      {"estimate", "-L", "1", "-H", "1.0 Z0", "--kind", "anticommutator",
       "--theta", "1.1", "--phi", "0.4", "--phi-ref", "1", "--time", "0.3",
       "--format", "json", "--output", out.string()});
  run_job(config);

  const auto doc = nlohmann::json::parse(read_file(out));
  // <1|{rho, Z}|1> = 2 rho_11 <1|Z|1> = -2 sin^2(theta/2)
  const double expected = -2.0 * std::sin(0.55) * std::sin(0.55);
  CHECK(std::abs(doc["result"]["re"].get<double>() - expected) < 1e-12);
  CHECK(doc["meta"]["mode"] == "exact");
  CHECK(doc["meta"]["version"] == "0.1.0");
}

TEST_CASE("vn-scan marks basis states stationary for a Z Hamiltonian") {
  const fs::path dir = temp_dir("vnscan");
  const fs::path out = dir / "scan.json";
  JobConfig config = parse_config(
      {"vn-scan", "-L", "1", "-H", "1.0 Z0", "--theta", "1.2",
       "--time-grid", "0:3:16", "--format", "json", "--output", out.string()});
  run_job(config);

  const auto doc = nlohmann::json::parse(read_file(out));
  REQUIRE(doc["candidates"].size() == 2);
  CHECK(doc["candidates"][0]["stationary"].get<bool>());
  CHECK(doc["candidates"][1]["stationary"].get<bool>());
  CHECK(doc["candidates"][0]["label"] == "|0>");
}

TEST_CASE("lindblad-rate emits a matrix in both formats") {
  const fs::path dir = temp_dir("rate");
  const fs::path json_out = dir / "rate.json";
  JobConfig config = parse_config(
      {"lindblad-rate", "-L", "1", "-H", "1.0 Z0", "--lindblad",
       "0.5 X0;0.5j Y0", "--theta", "2.2", "--time", "0.1", "--format",
       "json", "--output", json_out.string()});
  run_job(config);
  const auto doc = nlohmann::json::parse(read_file(json_out));
  CHECK(doc["dim"] == 2);
  const double rho11 = std::sin(1.1) * std::sin(1.1);
  CHECK(std::abs(doc["values"][0][0]["re"].get<double>() - rho11) < 1e-10);

  const fs::path csv_out = dir / "rate.csv";
  config.format = "csv";
  config.output_path = csv_out.string();
  run_job(config);
  const std::string csv = read_file(csv_out);
  CHECK(csv.rfind("row,col,re,im\n", 0) == 0);
}

TEST_CASE("damping demo is deterministic byte for byte") {
  const fs::path dir_a = temp_dir("demo_a");
  const fs::path dir_b = temp_dir("demo_b");
  for (const fs::path& dir : {dir_a, dir_b}) {
    JobConfig config = parse_config(
        {"damping-demo", "--omega", "-2", "--kappa", "1", "--phi", "0",
         "--delta-t", "0.1", "--grid-res", "6", "--output", dir.string()});
    run_job(config);
  }
  for (const char* name :
       {"panel_a.csv", "panel_b.csv", "panel_c.csv", "panel_d.csv",
        "report.json"}) {
    CHECK(read_file(dir_a / name) == read_file(dir_b / name));
  }

  const auto report = nlohmann::json::parse(read_file(dir_a / "report.json"));
  CHECK(report["meta"]["omega"] == "-2");
  CHECK(report["meta"]["kappa"] == "1");
  CHECK(report["rate_matrix"]["dim"] == 2);
  // theta defaults to pi/2: d rho00/dt = kappa sin^2(pi/4) = 1/2.
  CHECK(std::abs(report["rate_matrix"]["values"][0][0]["re"].get<double>() -
                 0.5) < 1e-10);
}

TEST_CASE("integrate reproduces the damping decay through the CLI") {
  const fs::path dir = temp_dir("integrate");
  const fs::path out = dir / "trajectory.json";
  JobConfig config = parse_config(
      {"integrate", "-L", "1", "-H", "1.0 Z0", "--lindblad", "0.5 X0;0.5j Y0",
       "--theta", "1.5707963267948966", "--t-final", "1", "--dt", "0.001",
       "--time-grid", "0:1:5", "--format", "json", "--output", out.string()});
  run_job(config);

  const auto doc = nlohmann::json::parse(read_file(out));
  REQUIRE(doc["times"].size() == 5);
  const auto& last = doc["states"][4];
  CHECK(std::abs(last[1][1]["re"].get<double>() - 0.5 * std::exp(-1.0)) < 1e-6);
  CHECK(doc["trace_defects"][4].get<double>() < 1e-8);
}

TEST_CASE("sampled runs with a fixed seed are byte-identical") {
  const fs::path dir = temp_dir("sampled");
  const fs::path out_a = dir / "a.json";
  const fs::path out_b = dir / "b.json";
  for (const fs::path& out : {out_a, out_b}) {
    JobConfig config = parse_config(
        {"estimate", "-L", "1", "-H", "1.0 Z0", "--kind", "anticommutator",
         "--theta", "1.1", "--phi-ref", "1", "--time", "0.3", "--mode",
         "sampled", "--shots", "5000", "--seed", "99", "--format", "json",
         "--output", out.string()});
    run_job(config);
  }
  CHECK(read_file(out_a) == read_file(out_b));

  const auto doc = nlohmann::json::parse(read_file(out_a));
  CHECK(doc["result"]["std_error"].get<double>() > 0.0);
  CHECK(doc["meta"]["seed"] == "99");
}

TEST_CASE("outputs do not depend on the thread budget") {
  const fs::path dir_serial = temp_dir("threads1");
  const fs::path dir_parallel = temp_dir("threads4");
  const struct {
    const fs::path* dir;
    const char* threads;
  } runs[] = {{&dir_serial, "1"}, {&dir_parallel, "4"}};
  for (const auto& run : runs) {
    setenv("COMMSIM_THREADS", run.threads, 1);
    JobConfig config = parse_config(
        {"damping-demo", "--omega", "-2", "--kappa", "1", "--phi", "0",
         "--delta-t", "0.1", "--grid-res", "10", "--output",
         run.dir->string()});
    run_job(config);
  }
  unsetenv("COMMSIM_THREADS");
  for (const char* name :
       {"panel_a.csv", "panel_b.csv", "panel_c.csv", "panel_d.csv",
        "report.json"}) {
    CHECK(read_file(dir_serial / name) == read_file(dir_parallel / name));
  }
}

TEST_CASE("unwritable output raises a RunError") {
  JobConfig config = parse_config({"estimate", "-L", "1", "-H", "1.0 Z0",
                                   "--output", "/nonexistent_dir/out.csv"});
  CHECK_THROWS_AS(run_job(config), commsim_cli::RunError);
}

#ifdef COMMSIM_CLI_PATH
TEST_CASE("binary exit codes follow the 0/2/3 contract") {
  const std::string cli = COMMSIM_CLI_PATH;
  auto run = [&cli](const std::string& tail) {
    const int status = std::system((cli + " " + tail).c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("--help > /dev/null") == 0);
  CHECK(run("estimate -L 1 2> /dev/null") == 2);                    // missing -H
  CHECK(run("estimate -L 1 -H '1.0 Zq' 2> /dev/null") == 2);        // bad token
  CHECK(run("estimate -L 1 -H '1.0 Z0' -o /nonexistent_dir/x 2> /dev/null") ==
        3);  // I/O failure
}
#endif
