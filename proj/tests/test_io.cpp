#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gcollage/collage.hpp"
#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"
#include "gcollage/io.hpp"

using namespace gcollage;
using nlohmann::json;

namespace {

CollageRule small_collage(int d) {
  RateParams p;
  p.d = d;
  p.alpha = 1;
  p.a = 1;
  return collage_direct([d](double m) { return smolyak_rule(m, d, 2); }, 2000.0, p, 1.0 / 6.0);
}

std::uint64_t bits(double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  return u;
}

} // namespace

TEST_CASE("format_number") {
  CHECK(io::format_number(0.1) == "0.100000000000000006");
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(-2.5e-300) == "-2.49999999999999998e-300");
  CHECK(io::format_number(NAN) == "nan");
  CHECK(io::format_number(INFINITY) == "inf");
  CHECK(io::format_number(-INFINITY) == "-inf");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    CHECK(std::stod(io::format_number(v)) == v);
  }
}

TEST_CASE("rule JSON schema and round trip") {
  const auto c = small_collage(2);
  REQUIRE(c.rule.size() > 0);
  const auto text = io::to_json(c.rule);
  const auto j = json::parse(text);
  CHECK(j["d"] == 2);
  CHECK(j["domain"] == "gaussian-Rd");
  CHECK(j["family"] == "collage(direct)");
  CHECK(j["m"] == 2000.0);
  CHECK(j["nodes"].size() == c.rule.size());
  CHECK(j["weights"].size() == c.rule.size());
  CHECK_FALSE(j.contains("cell"));

  const auto back = io::rule_from_json(text);
  REQUIRE(back.size() == c.rule.size());
  CHECK(back.dim() == 2);
  CHECK(back.domain() == Domain::GaussianRd);
  CHECK(back.family == c.rule.family);
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(bits(back.weight(i)) == bits(c.rule.weight(i)));
    for (int a = 0; a < 2; ++a) CHECK(bits(back.node(i)[a]) == bits(c.rule.node(i)[a]));
  }
  CHECK(io::to_json(back) == text);

  const auto cj = json::parse(io::to_json(c));
  CHECK(cj["cell"].size() == c.rule.size());
  CHECK(cj["base_index"].size() == c.rule.size());
  CHECK(cj["cell"][0].size() == 2);
  CHECK(io::rule_from_json(io::to_json(c)).size() == c.rule.size());
}

TEST_CASE("empty and non-finite rules") {
  QuadratureRule empty(1, Domain::GaussianRd);
  const auto j = json::parse(io::to_json(empty));
  CHECK(j["nodes"].empty());
  CHECK(io::rule_from_json(io::to_json(empty)).empty());
  CHECK(io::to_csv(empty) == "x1,weight\n");
  QuadratureRule bad(1, Domain::UnitCube);
  const double x[] = {0.5};
  bad.add(x, NAN);
  CHECK(json::parse(io::to_json(bad))["weights"][0].is_null());
  CHECK(io::to_csv(bad) == "x1,weight\n0.5,nan\n");
}

TEST_CASE("CSV layouts") {
  QuadratureRule r(2, Domain::UnitCube);
  const double x[] = {0.25, 0.75};
  r.add(x, 0.5);
  CHECK(io::to_csv(r) == "x1,x2,weight\n0.25,0.75,0.5\n");
  const auto c = small_collage(2);
  std::istringstream in(io::to_csv(c));
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "x1,x2,weight,cell_k1,cell_k2,base_index");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
  CHECK(rows == c.rule.size());
}

TEST_CASE("schedule JSON") {
  const auto s = budget_schedule(100.0, 1.0, 1.0 / 6.0, 1);
  const auto j = json::parse(io::to_json(s));
  CHECK(j["n"] == 100.0);
  CHECK(j["d"] == 1);
  CHECK(j["cells"].size() == 9);
  CHECK(j["cells"][0]["k"][0] == -4);
  CHECK(j["xi"].get<double>() == s.xi());
  CHECK(j["rho"].get<double>() == s.rho());
}

TEST_CASE("series JSON is sorted") {
  HermiteSeries f(2);
  f.set(MultiIndex(std::vector<int>{2, 0}), 1.5);
  f.set(MultiIndex(std::vector<int>{0, 3}), -1.0);
  f.set(MultiIndex(std::vector<int>{0, 1}), 0.25);
  CHECK(io::to_json(f) ==
        "{\"d\":2,\"coeffs\":[{\"k\":[0,1],\"value\":0.25},{\"k\":[0,3],\"value\":-1},{\"k\":[2,0],\"value\":1.5}]}\n");
}

TEST_CASE("report JSON") {
  WceReport r;
  r.n = 3;
  r.m = 10;
  r.alpha = 1;
  r.err_m = 0.5;
  r.weight_defect = 0.125;
  r.tail_estimate = INFINITY;
  const auto j = json::parse(io::to_json(r));
  CHECK(j["tail_estimate"].is_null());
  CHECK(j["err_m"] == 0.5);
  CHECK(j["n"] == 3);
}

TEST_CASE("sweep CSV and JSON") {
  std::vector<SweepRow> rows(2);
  rows[0].alpha = 1;
  rows[0].n_requested = 32;
  rows[0].n_actual = 3;
  rows[0].err_m = 0.5;
  rows[0].m = 100;
  rows[0].seconds = 0.25;
  rows[1] = rows[0];
  rows[1].n_requested = 1e300;
  rows[1].n_actual = 0;
  rows[1].error = "too \"big\", sorry";
  const auto csv = io::sweep_csv(rows, false);
  CHECK(csv == "alpha,n_requested,n_actual,err_m,m,seconds,error\n"
               "1,32,3,0.5,100,,\n"
               "1,1.00000000000000005e+300,0,,100,,\"too \"\"big\"\", sorry\"\n");
  CHECK(io::sweep_csv(rows, true).find("100,0.25,") != std::string::npos);
  const auto j = json::parse(io::sweep_json(rows, {{1, -1.25}}, false));
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["seconds"].is_null());
  CHECK(j["rows"][1]["err_m"].is_null());
  CHECK(j["rows"][1]["error"] == "too \"big\", sorry");
  CHECK(j["slopes"]["1"] == -1.25);
}

TEST_CASE("malformed rule files") {
  CHECK_THROWS_AS(io::rule_from_json("{"), InvalidArgument);
  CHECK_THROWS_AS(io::rule_from_json("{}"), InvalidArgument);
  CHECK_THROWS_AS(io::rule_from_json(R"({"d":1,"domain":"mars","nodes":[],"weights":[]})"), InvalidArgument);
  CHECK_THROWS_AS(io::rule_from_json(R"({"d":1,"domain":"gaussian-Rd","nodes":[[1]],"weights":[]})"),
                  InvalidArgument);
  CHECK_THROWS_AS(io::rule_from_json(R"({"d":2,"domain":"gaussian-Rd","nodes":[[1]],"weights":[1]})"),
                  InvalidArgument);
  CHECK_THROWS_AS(io::rule_from_json(R"({"d":1,"domain":"gaussian-Rd","nodes":[["a"]],"weights":[1]})"),
                  InvalidArgument);
  CHECK_THROWS_AS(io::rule_from_json(R"({"d":0,"domain":"gaussian-Rd","nodes":[],"weights":[]})"), InvalidArgument);
}

TEST_CASE("file helpers") {
  const auto path = (std::filesystem::temp_directory_path() / "gcollage_io_test.txt").string();
  io::write_file(path, "abc\n");
  CHECK(io::read_file(path) == "abc\n");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::read_file(path), InvalidArgument);
  CHECK_THROWS_AS(io::write_file("/nonexistent-dir/x", "y"), InvalidArgument);
}
