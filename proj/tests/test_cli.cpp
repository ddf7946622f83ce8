#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcollage/cli.hpp"
#include "gcollage/io.hpp"

using namespace gcollage;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string &name) : path(fs::temp_directory_path() / ("gcollage_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string &f) const { return (path / f).string(); }
};

nlohmann::json load(const std::string &path) { return nlohmann::json::parse(io::read_file(path)); }

} // namespace

TEST_CASE("budget list parsing") {
  const auto v = cli::parse_budget_list("32..2048x2");
  REQUIRE(v.size() == 7);
  CHECK(v.front() == 32);
  CHECK(v.back() == 2048);
  CHECK(cli::parse_budget_list("10,20,100..1000x10") == std::vector<double>{10, 20, 100, 1000});
  CHECK(cli::parse_int_list("1,2,3") == std::vector<int>{1, 2, 3});
  CHECK_THROWS(cli::parse_budget_list(""));
  CHECK_THROWS(cli::parse_budget_list("10..5x2"));
  CHECK_THROWS(cli::parse_budget_list("1..8x1"));
  CHECK_THROWS(cli::parse_budget_list("abc"));
  CHECK_THROWS(cli::parse_int_list("1.5"));
}

TEST_CASE("build example") {
  TempDir t("build");
  const auto r = run({"build", "--d", "1", "--alpha", "2", "--n", "256", "--delta", "0.16667", "--base", "smolyak",
                      "--psi", "3", "--variant", "direct", "--out", t / "r"});
  REQUIRE(r.code == 0);
  const auto j = load(t / "r.json");
  CHECK(j["nodes"].size() <= 256);
  CHECK(j["nodes"].size() > 0);
  CHECK(r.out.find("nodes: " + std::to_string(j["nodes"].size())) != std::string::npos);
  CHECK(r.out.find("ball_radius: ") != std::string::npos);
  CHECK(r.out.find("weight_sum: ") != std::string::npos);
  CHECK(fs::exists(t / "r.csv"));
  CHECK(load(t / "r.schedule.json")["n"] == 256.0);
  CHECK(j.contains("cell"));
}

TEST_CASE("build variants") {
  TempDir t("variants");
  CHECK(run({"build", "--d", "2", "--alpha", "1", "--n", "3000", "--variant", "partition", "--theta", "1.5", "--out",
             t / "p"})
            .code == 0);
  CHECK(run({"build", "--d", "2", "--alpha", "1", "--n", "3000", "--base", "fibonacci", "--out", t / "f"}).code == 0);
  CHECK(run({"build", "--d", "2", "--alpha", "1", "--n", "3000", "--base", "frolov", "--out", t / "fr"}).code == 0);
  CHECK(run({"build", "--d", "1", "--base", "fibonacci", "--out", t / "x"}).code == 2);
  CHECK(run({"build", "--d", "7", "--base", "frolov", "--out", t / "x"}).code == 2);
  CHECK(run({"build", "--variant", "mosaic", "--out", t / "x"}).code == 2);
  CHECK(run({"build", "--delta", "0.3", "--out", t / "x"}).code == 2);
  CHECK(run({"build", "--n", "0.5", "--out", t / "x"}).code == 2);
}

TEST_CASE("build with n = 1 warns and writes the empty rule") {
  TempDir t("empty");
  const auto r = run({"build", "--n", "1", "--out", t / "e"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning") != std::string::npos);
  CHECK(load(t / "e.json")["nodes"].empty());
  CHECK(r.out.find("nodes: 0") != std::string::npos);

  const auto c = run({"certify", "--in", t / "e.json", "--alpha", "1", "--m", "1000", "--out", t / "rep"});
  CHECK(c.code == 0);
  CHECK(c.out.find("err_m: 1\n") != std::string::npos);
  CHECK(load(t / "rep.json")["err_m"] == 1.0);
}

TEST_CASE("invalid theta exits with 2 and names the parameter") {
  TempDir t("theta");
  const auto r = run({"build", "--theta", "2.5", "--out", t / "x"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--theta") != std::string::npos);
  CHECK_FALSE(fs::exists(t / "x.json"));
}

TEST_CASE("parse errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"build", "--d", "abc"}).code == 2);
  CHECK(run({"build", "--bogus", "1"}).code == 2);
  CHECK(run({"build", "--help"}).code == 0);
}

TEST_CASE("certify failures") {
  TempDir t("certify");
  CHECK(run({"certify", "--in", t / "missing.json"}).code == 2);
  io::write_file(t / "far.json", R"({"d":1,"domain":"gaussian-Rd","nodes":[[1000]],"weights":[1]})");
  const auto r = run({"certify", "--in", t / "far.json", "--alpha", "2", "--out", t / "rep"});
  CHECK(r.code == 3);
  io::write_file(t / "two.json", R"({"d":2,"domain":"gaussian-Rd","nodes":[[0,0]],"weights":[1]})");
  CHECK(run({"certify", "--in", t / "two.json", "--out", t / "rep"}).code == 2);
  io::write_file(t / "bad.json", "{nope");
  CHECK(run({"certify", "--in", t / "bad.json", "--out", t / "rep"}).code == 2);
}

TEST_CASE("sweep output is byte-identical across runs") {
  TempDir t("sweep");
  const std::vector<std::string> base = {"sweep", "--alphas", "1,2", "--n", "32..256x2", "--m", "5000"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", t / "a"});
  b.insert(b.end(), {"--out", t / "b"});
  const auto ra = run(a), rb = run(b);
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out == rb.out);
  CHECK(io::read_file(t / "a.csv") == io::read_file(t / "b.csv"));
  CHECK(io::read_file(t / "a.json") == io::read_file(t / "b.json"));
  CHECK(io::read_file(t / "a.csv").rfind("alpha,n_requested,n_actual,err_m,m,seconds,error\n", 0) == 0);
  const auto j = load(t / "a.json");
  CHECK(j["rows"].size() == 8);
  CHECK(j["slopes"].contains("1"));
  CHECK(run({"sweep", "--delta", "0.3", "--out", t / "x"}).code == 2);
  CHECK(run({"sweep", "--alphas", "0", "--out", t / "x"}).code == 2);
}

TEST_CASE("config precedence: flags over config over defaults") {
  TempDir t("config");
  io::write_file(t / "cfg.json", R"({"n": 300, "alpha": 2, "d": 1})");
  REQUIRE(run({"build", "--config", t / "cfg.json", "--n", "500", "--out", t / "r"}).code == 0);
  const auto j = load(t / "r.schedule.json");
  CHECK(j["n"] == 500.0); // flag
  CHECK(j["a"] == 2.0);   // config
  CHECK(j["delta"] == doctest::Approx(1.0 / 6.0).epsilon(1e-15)); // default

  io::write_file(t / "sweep.json", R"({"alphas": [2], "n": "32,64,128", "timing": false, "m": 1000})");
  REQUIRE(run({"sweep", "--config", t / "sweep.json", "--out", t / "s"}).code == 0);
  CHECK(load(t / "s.json")["rows"].size() == 3);

  io::write_file(t / "unknown.json", R"({"colour": "blue"})");
  CHECK(run({"build", "--config", t / "unknown.json", "--out", t / "x"}).code == 2);
  io::write_file(t / "broken.json", "[1,2");
  CHECK(run({"build", "--config", t / "broken.json", "--out", t / "x"}).code == 2);
  io::write_file(t / "nested.json", R"({"n": {"a": 1}})");
  CHECK(run({"build", "--config", t / "nested.json", "--out", t / "x"}).code == 2);
}

TEST_CASE("grid command") {
  TempDir t("grid");
  const auto r = run({"grid", "--set", "hc", "--xi", "4", "--d", "2", "--out", t / "g"});
  CHECK(r.code == 0);
  CHECK(r.out == "points: 8\n");
  const auto csv = io::read_file(t / "g.csv");
  CHECK(csv.rfind("k1,k2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  const auto s = run({"grid", "--set", "sg", "--xi", "3", "--d", "2", "--out", t / "s"});
  CHECK(s.code == 0);
  CHECK(s.out.rfind("points: ", 0) == 0);
  CHECK(run({"grid", "--set", "zz", "--out", t / "z"}).code == 2);
}

TEST_CASE("partition-check command") {
  TempDir t("pcheck");
  const auto r = run({"partition-check", "--d", "2", "--theta", "1.5", "--samples", "200", "--out", t / "p"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("samples: 200\nmax_deviation: ", 0) == 0);
  const double dev = std::stod(r.out.substr(r.out.find("max_deviation: ") + 15));
  CHECK(dev <= 1e-12);
  const auto again = run({"partition-check", "--d", "2", "--theta", "1.5", "--samples", "200", "--out", t / "q"});
  CHECK(io::read_file(t / "p.csv") == io::read_file(t / "q.csv"));
  CHECK(run({"partition-check", "--theta", "1.0", "--out", t / "x"}).code == 2);
}
