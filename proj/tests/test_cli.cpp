#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "favlab/cli.hpp"
#include "json.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = favlab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("favard emits a CSV row") {
  const auto r = run({"favard", "--preset", "gasket", "--n", "3", "--grid", "4096"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("system,n,method,value,error,samples,seed\ngasket,3,quadrature,", 0) == 0);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"favard", "--preset", "bogus", "--n", "1"}).code == 2);
  CHECK(run({"--preset", "bogus"}).code == 2);
  CHECK(run({"favard", "--preset", "gasket"}).code == 2);
  CHECK(run({"buffon", "--preset", "gasket", "--n", "1"}).code == 2);
  CHECK(run({"verify", "--suite", "blaschke", "--trials", "5"}).code == 2);
  CHECK(run({"favard", "--preset", "gasket", "--n", "x"}).code == 2);
  CHECK(run({"spectral", "--preset", "gasket", "--n", "5", "--m", "3", "--ell", "2"}).code == 2);
}

TEST_CASE("errors are JSON with --json") {
  const auto r = run({"favard", "--preset", "bogus", "--n", "1", "--json"});
  CHECK(r.code == 2);
  const auto doc = nlohmann::json::parse(r.err);
  CHECK(doc["error"] == "UnknownPreset");
}

TEST_CASE("cap exceeded exits 3") {
  CHECK(run({"favard", "--preset", "gasket", "--n", "30"}).code == 3);
  CHECK(run({"buffon", "--preset", "gasket", "--n", "1", "--seed", "1", "--trials", "99999999999"}).code == 3);
}

TEST_CASE("unwritable output path exits 2") {
  const auto r = run({"favard", "--preset", "gasket", "--n", "1", "--output", "/nonexistent/dir/out.csv"});
  CHECK(r.code == 2);
}

TEST_CASE("verify report is deterministic with ordered keys") {
  const std::vector<std::string> args{"verify", "--suite", "blaschke", "--trials", "500", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("{\"suite\":\"blaschke\",\"trials\":500,\"worst_case\":", 0) == 0);
  CHECK(a.out.find("\"pass\":true") != std::string::npos);
}

TEST_CASE("failing suite exits 1") {
  const auto r = run({"verify", "--suite", "keyobs", "--trials", "10000", "--seed", "1"});
  CHECK(r.code == 1);
  CHECK(r.out.find("\"pass\":false") != std::string::npos);
}

TEST_CASE("thread count does not change output") {
  const std::vector<std::string> base{"buffon", "--preset", "gasket", "--n", "4", "--trials", "50000", "--seed", "3"};
  auto one = base, eight = base;
  one.insert(one.end(), {"--threads", "1"});
  eight.insert(eight.end(), {"--threads", "8"});
  CHECK(run(one).out == run(eight).out);
}

TEST_CASE("config file overrides flags") {
  const std::string path = "favlab_cli_test_config.json";
  {
    std::ofstream f(path);
    f << R"({"n": 1, "preset": "corner4"})";
  }
  const auto r = run({"favard", "--preset", "gasket", "--n", "3", "--config", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("\ncorner4,1,quadrature,") != std::string::npos);
  {
    std::ofstream f(path);
    f << R"({"depth": 1})";
  }
  CHECK(run({"favard", "--preset", "gasket", "--n", "3", "--config", path}).code == 2);
  std::remove(path.c_str());
}

TEST_CASE("subcommands run") {
  CHECK(run({"gen", "--preset", "gasket"}).code == 0);
  CHECK(run({"gen", "--preset", "corner4", "--n", "2"}).out.size() > 16 * 10);
  CHECK(run({"shadow", "--preset", "gasket", "--n", "2", "--theta", "0.3"}).code == 0);
  CHECK(run({"spectral", "--preset", "gasket", "--n", "8", "--m", "2", "--ell", "3", "--t", "0.4", "--grid", "50"}).code == 0);
  CHECK(run({"spectral", "--mode", "ssv", "--preset", "gasket", "--n", "8", "--m", "2", "--ell", "3", "--theta", "0.4"}).code == 0);
  CHECK(run({"spectral", "--mode", "parseval", "--preset", "gasket", "--n", "2", "--theta", "0.4"}).code == 0);
  CHECK(run({"spectral", "--mode", "ergodic", "--lambda", "1", "--N", "100"}).code == 0);
  for (const char* check : {"product", "escan", "l2", "bootstrap"}) {
    CHECK(run({"scan", "--check", check, "--preset", "gasket", "--N", "3", "--theta-grid", "16"}).code == 0);
  }
  CHECK(run({"scan", "--check", "baddir", "--preset", "gasket", "--n", "8", "--m", "2", "--ell", "4", "--tau", "0.05", "--theta-grid", "20"}).code == 0);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("favard") != std::string::npos);
}
