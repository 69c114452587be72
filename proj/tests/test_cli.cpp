// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kCli = MMHYBRID_CLI_PATH;
const fs::path kConfigs = MMHYBRID_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mmhybrid_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = kCli.string() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("validate accepts every shipped campaign config") {
  const auto dir = scratch("validate");
  for (const char* name : {"snr_sweep.json", "angle_spread_sweep.json", "coverage.json"}) {
    CAPTURE(name);
    CHECK(run("validate " + (kConfigs / name).string(), dir / "log") == 0);
    CHECK(slurp(dir / "log").find("ok") != std::string::npos);
  }
}

TEST_CASE("invalid configs fail with a diagnostic") {
  const auto dir = scratch("invalid");
  write(dir / "bad_key.json", R"({"campaign": "snr_sweep", "sweep": [0], "trails": 3})");
  CHECK(run("validate " + (dir / "bad_key.json").string(), dir / "log") != 0);
  CHECK(slurp(dir / "log").find("trails") != std::string::npos);

  write(dir / "broken.json", "{ not json");
  CHECK(run("validate " + (dir / "broken.json").string(), dir / "log") != 0);
  CHECK(slurp(dir / "log").find("error") != std::string::npos);

  CHECK(run("simulate " + (dir / "missing.json").string(), dir / "log") != 0);
  CHECK(run("", dir / "log") != 0);
  CHECK(run("simulate " + (kConfigs / "snr_sweep.json").string() + " --trials 0",
            dir / "log") != 0);
}

TEST_CASE("simulate writes byte-identical outputs for different worker counts") {
  const auto dir = scratch("simulate");
  write(dir / "cfg.json", R"({
    "campaign": "snr_sweep",
    "bs_array": {"rows": 4, "cols": 4},
    "ms_array": {"rows": 2, "cols": 2},
    "users": 2,
    "sweep": [0, 10, 20],
    "trials": 300,
    "output": "unused"
  })");
  const auto cfg = (dir / "cfg.json").string();
  REQUIRE(run("simulate " + cfg + " --workers 1 --seed 9 --out " + (dir / "a").string(), dir / "log") == 0);
  REQUIRE(run("simulate " + cfg + " --workers 3 --seed 9 --out " + (dir / "b").string(), dir / "log") == 0);
  const auto a = slurp(dir / "a" / "results.csv");
  CHECK(a.rfind("axis,series,mean,stderr,count\n", 0) == 0);
  CHECK(a == slurp(dir / "b" / "results.csv"));
  CHECK(fs::exists(dir / "a" / "plot.gp"));

  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(manifest.at("seed") == 9);
  CHECK(manifest.at("rows") == 12);
  CHECK(manifest.at("config").at("trials") == 300);

  REQUIRE(run("simulate " + cfg + " --seed 10 --trials 50 --out " + (dir / "c").string(), dir / "log") == 0);
  CHECK(slurp(dir / "c" / "results.csv") != a);
  CHECK(nlohmann::json::parse(slurp(dir / "c" / "manifest.json")).at("config").at("trials") == 50);
}
