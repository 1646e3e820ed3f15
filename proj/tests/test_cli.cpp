#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

const std::string kCli = DEGSPLIT_CLI_PATH;

int run_cmd(const std::string& args) {
  int rc = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string tmp_path(const std::string& name) { return "/tmp/degsplit_cli_" + name; }

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run_cmd("frobnicate") == 2);
  CHECK(run_cmd("run --algo no_such_algo --family cycle --n 8") == 2);
  CHECK(run_cmd("run --algo fine_color --eps 5.0 --family cycle --n 8") == 2);
}

TEST_CASE("generate is deterministic and parseable") {
  std::string a = tmp_path("gen_a.json"), b = tmp_path("gen_b.json");
  CHECK(run_cmd("generate --family regular --n 40 --delta 4 --seed 3 --out " + a) == 0);
  CHECK(run_cmd("generate --family regular --n 40 --delta 4 --seed 3 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  json g = json::parse(slurp(a));
  CHECK(g.at("n") == 40);
  CHECK(g.at("edges").size() == 80);
}

TEST_CASE("run emits a verified artifact") {
  std::string out = tmp_path("run_sinkless.json");
  CHECK(run_cmd("run --algo sinkless --family cycle --n 8 --seed 1 --out " + out) == 0);
  json j = json::parse(slurp(out));
  CHECK(j.at("validation").at("ok") == true);
  CHECK(j.at("artifact").size() == 8);
  CHECK(j.at("metrics").contains("rounds"));
}

TEST_CASE("run and verify round-trip") {
  std::string gpath = tmp_path("rt_graph.json"), rpath = tmp_path("rt_run.json");
  std::string apath = tmp_path("rt_artifact.json");
  CHECK(run_cmd("generate --family regular --n 60 --delta 6 --seed 2 --out " + gpath) == 0);
  CHECK(run_cmd("run --algo base_color --graph " + gpath + " --out " + rpath) == 0);
  json run = json::parse(slurp(rpath));
  {
    std::ofstream f(apath);
    f << run.at("artifact").dump();
  }
  CHECK(run_cmd("verify --graph " + gpath + " --artifact " + apath + " --contract proper") ==
        0);

  // Tamper: force two edges sharing a node to the same color.
  json graph = json::parse(slurp(gpath));
  auto e0 = graph.at("edges").at(0);
  std::size_t clash = 0;
  for (std::size_t k = 1; k < graph.at("edges").size(); ++k) {
    auto ek = graph.at("edges").at(k);
    if (ek.at(1) == e0.at(1) || ek.at(1) == e0.at(2) || ek.at(2) == e0.at(1) ||
        ek.at(2) == e0.at(2)) {
      clash = k;
      break;
    }
  }
  REQUIRE(clash != 0);
  json art = run.at("artifact");
  art.at("colors")["0"] = art.at("colors").at(std::to_string(clash));
  {
    std::ofstream f(apath);
    f << art.dump();
  }
  int rc = run_cmd("verify --graph " + gpath + " --artifact " + apath + " --contract proper");
  CHECK(rc == 1);
}

TEST_CASE("bench sweeps seeds") {
  std::string out = tmp_path("bench.jsonl");
  CHECK(run_cmd("bench --algo split_random --family regular --n 50 --delta 6 --eps 0.5 "
                "--seeds 1..5 --out " +
                out) == 0);
  std::istringstream rows(slurp(out));
  std::string line;
  int count = 0;
  while (std::getline(rows, line)) {
    json row = json::parse(line);
    CHECK(row.at("pass") == true);
    CHECK(row.at("algorithm") == "split_random");
    ++count;
  }
  CHECK(count == 5);
}

TEST_CASE("byte-identical reruns") {
  std::string a = tmp_path("det_a.json"), b = tmp_path("det_b.json");
  std::string cmd = "run --algo randomized_color --family regular --n 64 --delta 8 "
                    "--eps 0.5 --seed 9 --out ";
  CHECK(run_cmd(cmd + a) == 0);
  CHECK(run_cmd(cmd + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("orientation algorithms through the cli") {
  CHECK(run_cmd("run --algo arboricity_orient --family forest_union --n 100 --a 3 "
                "--eps 0.25 --seed 1") == 0);
  CHECK(run_cmd("run --algo directed_split_det --family regular --n 100 --delta 16 "
                "--eps 0.5 --seed 1") == 0);
  CHECK(run_cmd("run --algo forest_decompose --family regular --n 50 --delta 12 --a 12 "
                "--eps 0.6 --seed 1") == 0);
}
