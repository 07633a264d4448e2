#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "skyfleet_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = "cd '" + workdir().string() + "' && '" SKYFLEET_CLI "' " + args + " >out.txt 2>err.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generate") {
  CHECK(run("generate --case 1 --seed 7 --out w.json") == 0);
  const auto j = nlohmann::json::parse(slurp(workdir() / "w.json"));
  CHECK(j["users"].size() == 14);
  CHECK(j["world"]["centroids"].size() == 1);
  CHECK(run("generate --case 10 --seed 7 --out w.json") == 2);
  CHECK(run("generate --case 1 --config w.json --out x.json") == 2);
  CHECK(run("generate --seed 7 --out x.json") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("seed falls back to the environment") {
  CHECK(run("generate --case 2 --seed 5 --out a.json") == 0);
  CHECK(run("generate --case 2 --out b.json") == 0);
  CHECK(std::system(("cd '" + workdir().string() + "' && SKYFLEET_SEED=5 '" SKYFLEET_CLI
                     "' generate --case 2 --out c.json >/dev/null").c_str()) == 0);
  CHECK(slurp(workdir() / "a.json") == slurp(workdir() / "c.json"));
  CHECK(slurp(workdir() / "a.json") != slurp(workdir() / "b.json"));
}

TEST_CASE("train, eval and render") {
  REQUIRE(run("train --case 1 --algo qlearning --seed 7 --epochs 40 --out-dir t") == 0);
  const auto csv = slurp(workdir() / "t" / "metrics.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 41);
  CHECK(fs::exists(workdir() / "t" / "qtable_agent0.json"));

  CHECK(run("eval --world t/world.json --qtables t --epochs 5 --greedy --out e1.csv") == 0);
  CHECK(run("eval --world t/world.json --qtables t --epochs 5 --greedy --out e2.csv") == 0);
  CHECK(slurp(workdir() / "e1.csv") == slurp(workdir() / "e2.csv"));

  // Tables from a different grid do not fit this world.
  REQUIRE(run("train --case 5 --seed 7 --epochs 2 --out-dir t5") == 0);
  CHECK(run("eval --world t/world.json --qtables t5 --epochs 5 --greedy") == 1);

  CHECK(run("render --world t/world.json --trace t/trace.jsonl --iter 1170 --out snap.svg") == 0);
  CHECK(slurp(workdir() / "snap.svg").find("class=\"footprint\"") != std::string::npos);
  CHECK(run("render --world t/world.json --trace t/trace.jsonl --iter 3 --out snap.svg") == 1);

  CHECK(run("train --case 1 --algo baseline --seed 7 --epochs 3 --out-dir b") == 0);
  CHECK(run("train --case 1 --algo dqn --epochs 3 --out-dir b") == 2);
}

TEST_CASE("serve over stdio") {
  std::ofstream(workdir() / "in.txt") << "{\"cmd\":\"spec\"}\n{\"cmd\":\"reset\",\"seed\":1}\n"
                                         "{\"cmd\":\"step\",\"actions\":[1]}\nnot json\n{\"cmd\":\"close\"}\n";
  CHECK(run("serve --case 1 < in.txt") == 0);
  std::istringstream lines(slurp(workdir() / "out.txt"));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    if (n == 0) CHECK(j["n_actions"] == 5);
    if (n == 2) CHECK(j["rewards"].size() == 1);
    if (n == 3) CHECK(j.contains("error"));
    ++n;
  }
  CHECK(n == 5);
}
