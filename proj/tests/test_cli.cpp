#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "dilatlab/cli.hpp"
#include "json.hpp"

using namespace dilatlab;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv = {"dilatlab"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("list prints the registry and the manifest schema") {
  const Run r = cli({"list"});
  CHECK(r.code == kExitPass);
  for (const char* name : {"euclidean2", "heisenberg", "heisenberg-warped", "complex-0.5", "snowflake-0.3",
                           "riemannian-shear", "riemannian-tanh-v2"}) {
    CHECK_MESSAGE(r.out.find(std::string(name) + "\n") != std::string::npos, name);
  }
  CHECK(r.out.find("manifest schema: 1\n") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const Run r = cli({"--help"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("verify passes on euclidean2 with a JSON report") {
  const Run r = cli({"verify", "--structure", "euclidean2", "--samples", "6", "--seed", "3"});
  CHECK(r.code == kExitPass);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "pass");
  CHECK(j["structure"] == "euclidean2");
  CHECK(j["seed"] == 3);
  CHECK(r.err.find("a0a1: pass") != std::string::npos);
  CHECK(r.err.find("conical: pass") != std::string::npos);
}

TEST_CASE("report bytes are deterministic for a seed") {
  const auto a = cli({"verify", "--structure", "complex-0.5", "--checks", "a0a1,a4", "--samples", "4", "--seed", "11"});
  const auto b = cli({"verify", "--structure", "complex-0.5", "--checks", "a0a1,a4", "--samples", "4", "--seed", "11"});
  CHECK(a.code == kExitPass);
  CHECK(a.out == b.out);
  const auto c = cli({"verify", "--structure", "complex-0.5", "--checks", "a0a1,a4", "--samples", "4", "--seed", "12"});
  CHECK(c.out != a.out);
}

TEST_CASE("exit status follows the verdict") {
  // An identity tolerance below rounding cannot be met.
  CHECK(cli({"verify", "--structure", "riemannian-tanh", "--checks", "a0a1", "--samples", "5", "--tol.identity", "1e-18"})
            .code == kExitFail);
  // Three eps values are too few to establish a limit.
  const Run inc = cli({"verify", "--structure", "riemannian-tanh", "--checks", "a3", "--eps-count", "3", "--samples", "3"});
  CHECK(inc.code == kExitInconclusive);
  CHECK(json::parse(inc.out)["verdict"] == "inconclusive");
}

TEST_CASE("configuration errors exit with 64") {
  const std::vector<std::vector<const char*>> bad = {
      {"verify", "--structure", "bogus"},
      {"verify"},
      {"verify", "--structure", "euclidean2", "--tol.foo", "1"},
      {"verify", "--structure", "euclidean2", "--tol.limit", "-1"},
      {"verify", "--structure", "euclidean2", "--tol.limit"},
      {"verify", "--structure", "euclidean2", "--checks", "a9"},
      {"verify", "--structure", "euclidean2", "--format", "xml"},
      {"verify", "--structure", "euclidean2", "--eps-count", "1"},
      {"verify", "--structure", "euclidean2", "--eps-start", "2"},
      {"verify", "--structure", "euclidean2", "--samples", "0"},
      {"verify", "--manifest", "/nonexistent/m.json"},
      {"tangent", "--structure", "euclidean2", "--point", "1,2,3"},
      {"profile", "--structure", "euclidean2", "--samples", "9"},
      {"frobnicate"},
  };
  for (const auto& args : bad) {
    std::vector<const char*> argv = {"dilatlab"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    CHECK_MESSAGE(code == kExitConfig, (args.size() > 2 ? args[2] : args[0]));
    CHECK(err.str().rfind("error: ", 0) == 0);
  }
}

TEST_CASE("tolerance flags reach the checks") {
  const Run loose = cli({"verify", "--structure", "euclidean2", "--checks", "a0a1", "--samples", "4", "--tol.identity", "0.5"});
  CHECK(loose.code == kExitPass);
  CHECK(json::parse(loose.out)["reports"][0]["tolerance"] == 0.5);
}

TEST_CASE("tangent reports Sigma against the closed form") {
  const Run r = cli({"tangent", "--structure", "euclidean2", "--point", "0.1,-0.2", "--samples", "3"});
  CHECK(r.code == kExitPass);
  const json j = json::parse(r.out);
  CHECK(j["point"][0] == 0.1);
  REQUIRE(j["tangent"].size() == 3);
  for (const auto& row : j["tangent"]) {
    CHECK(row["oracle_residual"].get<double>() < 1e-8);
    CHECK(row["dx"].get<double>() > 0.0);
  }
  const Run h = cli({"tangent", "--structure", "heisenberg", "--samples", "2"});
  CHECK(h.code == kExitPass);
}

TEST_CASE("profile on euclidean2") {
  const Run r = cli({"profile", "--structure", "euclidean2", "--samples", "4"});
  CHECK(r.code == kExitPass);
  CHECK(json::parse(r.out)["verdict"] == "pass");
}

TEST_CASE("csv output and --out") {
  const Run r = cli({"verify", "--structure", "euclidean1", "--checks", "a0a1", "--samples", "3", "--format", "csv"});
  CHECK(r.code == kExitPass);
  CHECK(r.out.rfind("# a0a1\n", 0) == 0);
  const std::string path = "test_cli_out.json";
  CHECK(cli({"verify", "--structure", "euclidean1", "--checks", "a0a1", "--samples", "3", "--out", path.c_str()}).code ==
        kExitPass);
  CHECK(json::parse(slurp(path))["verdict"] == "pass");
  std::remove(path.c_str());
  const std::string csv = "test_cli_out.csv";
  CHECK(cli({"verify", "--structure", "euclidean1", "--checks", "a0a1,a3", "--samples", "3", "--format", "csv", "--out",
             csv.c_str()})
            .code == kExitPass);
  for (const char* part : {"test_cli_out-a0a1.csv", "test_cli_out-a3.csv"}) {
    CHECK_MESSAGE(!slurp(part).empty(), part);
    std::remove(part);
  }
}

TEST_CASE("the installed binary maps statuses the same way") {
  const std::string bin = DILATLAB_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("list") == 0);
  CHECK(status("verify --structure bogus") == 64);
  CHECK(status("verify --structure riemannian-tanh --checks a0a1 --samples 5 --tol.identity 1e-18") == 1);
}
