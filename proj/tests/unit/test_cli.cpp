#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cxorder/cli.hpp"
#include "cxorder/errors.hpp"
#include "cxorder/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cxorder");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cxorder::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(json::parse(line));
  return out;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("cxorder_cli_" + std::to_string(cxorder::entropy_seed()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& body) const {
    const auto p = path_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string sample_file(const TempDir& dir, const std::string& name, double shape, std::size_t n, std::uint64_t seed) {
  cxorder::Engine rng = cxorder::stream_engine(seed, 0);
  std::ostringstream body;
  body << "# synthetic data\n\n";
  body.precision(17);
  for (std::size_t i = 0; i < n; ++i) body << std::pow(-std::log(cxorder::uniform_open(rng)), 1 / shape) << '\n';
  return dir.write(name, body.str());
}

}  // namespace

TEST_CASE("read_values handles comments, blanks and bad lines") {
  std::istringstream ok("# header\n1.5\n\n  2 # trailing\n-3e-1\n");
  CHECK(cxorder::cli::read_values(ok, "x") == std::vector<double>{1.5, 2.0, -0.3});
  std::istringstream bad("1\n2\nabc\n");
  try {
    cxorder::cli::read_values(bad, "data.csv");
    FAIL("expected an error");
  } catch (const cxorder::IngestError& e) {
    CHECK(std::string(e.what()).find("data.csv:3") != std::string::npos);
  }
  std::istringstream nan_in("1\nnan\n");
  CHECK_THROWS_AS(cxorder::cli::read_values(nan_in, "x"), cxorder::IngestError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(cxorder::cli::read_values(empty, "x"), cxorder::IngestError);
  CHECK(std::isinf(cxorder::cli::parse_p_norm("inf")));
  CHECK(cxorder::cli::parse_p_norm("2") == 2.0);
  CHECK_THROWS_AS(cxorder::cli::parse_p_norm("two"), cxorder::ConfigError);
}

TEST_CASE("test subcommand emits one record per side") {
  TempDir dir;
  const auto data = sample_file(dir, "exp.csv", 1.0, 60, 1);
  const auto r = run({"test", "--g", "exponential", "--side", "both", "--m", "5", "--p", "1", "--alpha", "0.1",
                      "--trials", "500", "--seed", "42", data});
  REQUIRE(r.code == 0);
  const auto recs = lines(r.out);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["side"] == "upper");
  CHECK(recs[1]["side"] == "lower");
  for (const auto& j : recs) {
    for (const char* key : {"g", "g_params", "n", "m", "p", "ell", "indices", "side", "statistic", "critical_value",
                            "p_value", "reject", "alpha", "trials", "seed", "warnings"}) {
      CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j["g"] == "exponential");
    CHECK(j["n"] == 60);
    CHECK(j["m"] == 5);
    CHECK(j["ell"] == 5);
    CHECK(j["trials"] == 500);
    CHECK(j["seed"] == 42);
    CHECK(j["alpha"] == 0.1);
  }
}

TEST_CASE("test output is identical across thread counts") {
  TempDir dir;
  const auto data = sample_file(dir, "exp.csv", 1.0, 40, 2);
  const auto a = run({"test", "--side", "both", "--m", "4", "--trials", "400", "--seed", "9", "--threads", "1", data});
  const auto b = run({"test", "--side", "both", "--m", "4", "--trials", "400", "--seed", "9", "--threads", "3", data});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("test subcommand flag paths") {
  TempDir dir;
  const auto data = sample_file(dir, "ll.csv", 1.5, 80, 3);
  const auto r = run({"test", "--g", "log-logistic", "--m", "5", "--ell", "3", "--assumed-alpha", "1", "--side",
                      "both", "--trials", "300", "--seed", "1", data});
  REQUIRE(r.code == 0);
  const auto recs = lines(r.out);
  CHECK(recs[0]["indices"] == json::array({1, 2, 3}));
  CHECK(recs[0]["g_params"] == json::array({1.0}));
  CHECK(recs[0]["assumed_alpha"] == 1.0);

  const auto idx = run({"test", "--m", "6", "--indices", "2,4", "--p", "inf", "--trials", "300", "--seed", "1", data});
  REQUIRE(idx.code == 0);
  CHECK(lines(idx.out)[0]["indices"] == json::array({2, 4}));
  CHECK(lines(idx.out)[0]["p"] == "inf");

  // Default m follows ceil(0.15 n); no seed means an echoed entropy seed.
  const auto def = run({"test", "--trials", "300", data});
  REQUIRE(def.code == 0);
  CHECK(lines(def.out)[0]["m"] == 12);
  CHECK(lines(def.out)[0]["seed"].is_number_unsigned());
}

TEST_CASE("DHR-like data give a small lower-side p-value") {
  TempDir dir;
  const auto data = sample_file(dir, "dhr.csv", 0.5, 100, 4);
  const auto r = run({"test", "--g", "exponential", "--side", "lower", "--m", "5", "--trials", "2000", "--seed", "3",
                      data});
  REQUIRE(r.code == 0);
  const auto rec = lines(r.out)[0];
  CHECK(rec["p_value"].get<double>() < 0.05);
  CHECK(rec["reject"] == true);
}

TEST_CASE("decisions never change the exit code; errors do") {
  TempDir dir;
  const auto data = sample_file(dir, "ihr.csv", 3.0, 100, 5);
  const auto reject = run({"test", "--m", "5", "--trials", "500", "--seed", "1", data});
  CHECK(reject.code == 0);
  CHECK(lines(reject.out)[0]["reject"] == true);

  const auto missing = run({"test", (dir.path() / "nope.csv").string()});
  CHECK(missing.code != 0);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  const auto bad = dir.write("bad.csv", "1\n2\nx\n");
  const auto parse = run({"test", bad});
  CHECK(parse.code != 0);
  CHECK(parse.err.find(":3") != std::string::npos);

  const auto infeasible = run({"test", "--g", "cauchy", "--m", "1", "--trials", "200", data});
  CHECK(infeasible.code != 0);
  CHECK_FALSE(infeasible.err.empty());

  CHECK(run({"test", "--g", "gamma", data}).code != 0);
  CHECK(run({"frobnicate"}).code != 0);
  CHECK(run({}).code != 0);
}

TEST_CASE("pp-test subcommand") {
  TempDir dir;
  const auto data = sample_file(dir, "w.csv", 1.5, 50, 6);
  const auto r = run({"pp-test", "--side", "both", "--trials", "500", "--seed", "2", data});
  REQUIRE(r.code == 0);
  const auto recs = lines(r.out);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0]["side"] == "ihr");
  CHECK(recs[1]["side"] == "dhr");
  CHECK(recs[0]["test"] == "proschan-pyke");

  const auto two = dir.write("two.csv", "1\n2\n");
  const auto err = run({"pp-test", two});
  CHECK(err.code != 0);
  CHECK(err.err.find("at least 3") != std::string::npos);
}

TEST_CASE("critical-value grids") {
  const auto one = run({"critical-value", "--n", "20", "--m", "3", "--side", "upper", "--trials", "300", "--seed", "1"});
  REQUIRE(one.code == 0);
  std::istringstream is(one.out);
  std::string header, row, extra;
  std::getline(is, header);
  CHECK(header == "g,n,m,ell,p,side,alpha,critical_value,trials,seed");
  std::getline(is, row);
  CHECK(row.rfind("exponential,20,3,3,1,upper,0.1,", 0) == 0);
  CHECK_FALSE(std::getline(is, extra));

  const auto grid = run({"critical-value", "--n", "20,40", "--m", "1,5", "--p", "1,inf", "--trials", "300",
                         "--seed", "1"});
  REQUIRE(grid.code == 0);
  CHECK(std::count(grid.out.begin(), grid.out.end(), '\n') == 1 + 2 * 2 * 2 * 2);

  const auto ell = run({"critical-value", "--g", "log-logistic", "--n", "30", "--m", "5", "--ell", "3",
                        "--assumed-alpha", "1", "--side", "lower", "--trials", "300", "--seed", "1"});
  REQUIRE(ell.code == 0);
  CHECK(ell.out.find("log-logistic:1,30,5,3,1,lower") != std::string::npos);
}

TEST_CASE("power and reproduce subcommands") {
  TempDir dir;
  const auto out = (dir.path() / "power.csv").string();
  const auto p = run({"power", "--family", "weibull", "--params", "1.5", "--n", "30", "--m", "1,5", "--reps", "50",
                      "--trials", "200", "--seed", "4", "-o", out});
  REQUIRE(p.code == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "family,param,n,m,ell,p,side,rate,se,trials,seed");

  const auto rep = run({"reproduce", "fig_dor", "--reps", "10", "--trials", "100", "--out-dir",
                        dir.path().string()});
  REQUIRE(rep.code == 0);
  CHECK(fs::exists(dir.path() / "fig_dor.csv"));
  CHECK(run({"reproduce", "table9", "--out-dir", dir.path().string()}).code != 0);
}

TEST_CASE("hill subcommand") {
  TempDir dir;
  cxorder::Engine rng = cxorder::stream_engine(8, 0);
  std::ostringstream body;
  body.precision(17);
  for (int i = 0; i < 10000; ++i) body << std::pow(cxorder::uniform_open(rng), -0.5) << '\n';
  const auto data = dir.write("pareto.csv", body.str());
  const auto r = run({"hill", data});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["k"] == 100);
  CHECK(std::abs(j["alpha_hat"].get<double>() - 2.0) < 0.5);

  const auto neg = dir.write("neg.csv", "-1\n2\n3\n4\n");
  CHECK(run({"hill", neg}).code != 0);
}
