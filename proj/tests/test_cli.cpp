#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cdpre_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(std::initializer_list<std::string> args) {
  return cdpre::cli::run(std::vector<std::string>(args));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("theta output is byte-identical across reruns and thread counts") {
  TempDir dir;
  std::string out1 = dir.file("a.csv"), out2 = dir.file("b.csv"), out3 = dir.file("c.csv");
  CHECK(run({"theta", "--model", "bernoulli", "--t", "0.4", "--n", "2,4", "--reps", "400",
             "--seed", "11", "--threads", "1", "--out", out1}) == 0);
  CHECK(run({"theta", "--model", "bernoulli", "--t", "0.4", "--n", "2,4", "--reps", "400",
             "--seed", "11", "--threads", "2", "--out", out2}) == 0);
  CHECK(run({"theta", "--model", "bernoulli", "--t", "0.4", "--n", "2,4", "--reps", "400",
             "--seed", "11", "--threads", "2", "--out", out3}) == 0);
  std::string a = slurp(out1);
  CHECK(!a.empty());
  CHECK(a == slurp(out2));
  CHECK(a == slurp(out3));
}

TEST_CASE("theta zero-time column is all zeros") {
  TempDir dir;
  std::string out = dir.file("zero.csv");
  CHECK(run({"theta", "--model", "bernoulli", "--t", "0", "--n", "1,2,4", "--reps", "100",
             "--out", out}) == 0);
  std::istringstream is(slurp(out));
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("model", 0) == 0) continue;
    CHECK(line.find(",0,") != std::string::npos);
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("config file provides defaults and flags override") {
  TempDir dir;
  std::string cfg = dir.file("cfg.json");
  {
    std::ofstream os(cfg);
    os << R"({"model":"bernoulli","t":0.3,"n":"2","reps":150,"seed":5})";
  }
  std::string out1 = dir.file("c1.csv"), out2 = dir.file("c2.csv");
  CHECK(run({"theta", "--config", cfg, "--out", out1}) == 0);
  std::string body1 = slurp(out1);
  CHECK(body1.find("bernoulli,0.3,2,") != std::string::npos);
  CHECK(body1.find(",150,") != std::string::npos);

  CHECK(run({"theta", "--config", cfg, "--t", "0.6", "--out", out2}) == 0);
  std::string body2 = slurp(out2);
  CHECK(body2.find("bernoulli,0.6,2,") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  // configuration errors
  CHECK(run({"theta", "--rho", "0.5,0.5", "--model", "cdpre"}) == 1);
  CHECK(run({"nonsense"}) == 1);
  CHECK(run({"fit"}) == 1);
  CHECK(run({"dominance", "--rho", "0.5,0,0,0.5", "--reps", "5", "--n", "2"}) == 1);
  // runtime error: malformed input file
  std::string bad = dir.file("bad.csv");
  {
    std::ofstream os(bad);
    os << "# nothing\n";
  }
  CHECK(run({"fit", "--input", bad}) == 2);
  // success paths
  CHECK(run({"dominance", "--rho", "0,0,0,1", "--t", "0.5", "--n", "2", "--reps", "20", "--out",
             dir.file("dom.csv")}) == 0);
  CHECK(run({"oracle-check", "--reps", "4000", "--t", "0.5", "--fixture", "single_edge",
             "--out", dir.file("oracle.json")}) == 0);
}

TEST_CASE("blocks dump carries the distinguished edges") {
  TempDir dir;
  std::string out = dir.file("blocks.json");
  CHECK(run({"blocks", "--r0", "0", "--r1", "1", "--s0", "0", "--s1", "0", "--out", out}) == 0);
  json j = json::parse(slurp(out));
  REQUIRE(j["blocks"].size() == 2);
  CHECK(j["blocks"][0]["g"] == json::parse("[[2,2],[3,2]]"));
  CHECK(j["blocks"][0]["a_set"].size() == 6);
  CHECK(j["blocks"][0]["b_set"].size() == 42);
  CHECK(j["blocks"][1]["g"] == json::parse("[[8,2],[9,2]]"));
  CHECK(j.contains("config_hash"));
}

TEST_CASE("dump emits the configuration schema") {
  TempDir dir;
  std::string out = dir.file("config.csv");
  CHECK(run({"dump", "--what", "config", "--model", "intermediate", "--t", "0.5", "--n", "3",
             "--out", out}) == 0);
  std::string body = slurp(out);
  CHECK(body.find("edge_a_x1,edge_a_x2,edge_b_x1,edge_b_x2,open_bit") != std::string::npos);

  std::string env_out = dir.file("env.json");
  CHECK(run({"dump", "--what", "env", "--rho", "0,0,0.5,0.5", "--n", "2", "--out", env_out}) == 0);
  json j = json::parse(slurp(env_out));
  CHECK(j["records"].size() == 25);

  std::string clocks_out = dir.file("clocks.json");
  CHECK(run({"dump", "--what", "clocks", "--n", "2", "--out", clocks_out}) == 0);
  json c = json::parse(slurp(clocks_out));
  CHECK(c["records"].size() == 2 * 4 * 5);
}

TEST_CASE("scan, mzone, covariance, and osss produce stamped outputs") {
  TempDir dir;
  CHECK(run({"scan", "--model", "bernoulli", "--n", "8", "--t-grid", "0.3:0.7:0.1", "--reps",
             "150", "--out", dir.file("scan.csv")}) == 0);
  CHECK(slurp(dir.file("scan.csv")).find("# crossing-t:") != std::string::npos);

  CHECK(run({"mzone", "--m", "4", "--t", "1", "--reps", "500", "--out", dir.file("mzone.csv")}) ==
        0);
  CHECK(slurp(dir.file("mzone.csv")).find("# master-seed:") != std::string::npos);

  CHECK(run({"covariance", "--model", "bernoulli", "--m", "2", "--n", "6", "--t", "0.5",
             "--reps", "500", "--out", dir.file("cov.csv")}) == 0);

  CHECK(run({"osss", "--t", "0.45", "--n", "3", "--reps", "150", "--out", dir.file("osss.json"),
             "--delta-out", dir.file("delta.csv"), "--influence-out", dir.file("inf.csv")}) == 0);
  json j = json::parse(slurp(dir.file("osss.json")));
  CHECK(j["per_k"].size() == 3);

  std::string theta_out = dir.file("theta_for_fit.csv");
  CHECK(run({"theta", "--model", "bernoulli", "--t", "0.3", "--n", "2,4,6,8", "--reps", "2000",
             "--seed", "3", "--out", theta_out}) == 0);
  CHECK(run({"fit", "--input", theta_out, "--family", "pure", "--out", dir.file("fit.json")}) ==
        0);
  json f = json::parse(slurp(dir.file("fit.json")));
  CHECK(f["alpha_hat"].get<double>() > 0.0);
}

}  // TEST_SUITE
