#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chowcert/cli.hpp"

using namespace chowcert;
using nlohmann::ordered_json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;

  ordered_json json() const { return ordered_json::parse(out); }
};

CliResult run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("chowcert");
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("quotient dimension subcommand") {
  SECTION("human-readable output and exit code") {
    CliResult r = run({"pch", "dim", "--k1", "5", "--k2", "5"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("outcome: pass") != std::string::npos);
    REQUIRE(r.out.find("\"dim\": 3") != std::string::npos);
  }
  SECTION("JSON payload") {
    CliResult r = run({"pch", "dim", "--k1", "5", "--k2", "5", "--json"});
    REQUIRE(r.code == 0);
    ordered_json j = r.json();
    REQUIRE(j["tool"] == "chowcert");
    REQUIRE(j["version"] == kToolVersion);
    REQUIRE(j["command"] == "pch dim");
    REQUIRE(j["parameters"]["k1"] == 5);
    REQUIRE(j["parameters"]["k2"] == 5);
    REQUIRE(j["multiplicity_profile"] == "default");
    REQUIRE(j["outcome"] == "pass");
    REQUIRE(j["payload"]["dim"] == 3);
    REQUIRE(j.contains("elapsed_seconds"));
  }
  SECTION("global flags may precede the subcommand") {
    CliResult r = run({"--json", "pch", "dim", "--k1", "4", "--k2", "6"});
    REQUIRE(r.code == 0);
    REQUIRE(r.json()["payload"]["dim"] == 3);
  }
}

TEST_CASE("generator subcommand reports coordinates") {
  CliResult r = run({"pch", "generators", "--k1", "4", "--k2", "4", "--json"});
  REQUIRE(r.code == 0);
  ordered_json j = r.json();
  REQUIRE(j["payload"]["quotient_dim"] == 3);
}

TEST_CASE("fibre statistics subcommand") {
  CliResult r = run({"fibre", "stats", "--k1", "3", "--k2", "4", "--json"});
  REQUIRE(r.code == 0);
  ordered_json j = r.json();
  REQUIRE(j["command"] == "fibre stats");
  REQUIRE(j["outcome"] == "pass");
  REQUIRE(j["payload"]["components"] == 3 * 4 * 2);
}

TEST_CASE("complex verification subcommand") {
  SECTION("default multiplicities pass") {
    CliResult r = run({"complex", "verify", "--k1", "4", "--k2", "5", "--json"});
    REQUIRE(r.code == 0);
    REQUIRE(r.json()["outcome"] == "pass");
  }
  SECTION("all-ones multiplicities fail the weighted sums") {
    CliResult r = run({"complex", "verify", "--k1", "4", "--k2", "5",
                       "--multiplicity-profile", "all-ones", "--json"});
    REQUIRE(r.code == 1);
    ordered_json j = r.json();
    REQUIRE(j["multiplicity_profile"] == "all-ones");
    REQUIRE(j["outcome"] == "fail");
  }
}

TEST_CASE("divisor solve subcommand") {
  CliResult r = run({"genus2", "solve", "--r", "3", "--s", "2", "--t", "3", "--json"});
  REQUIRE(r.code == 0);
  ordered_json j = r.json();
  REQUIRE(j["command"] == "genus2 solve");
  REQUIRE(j["outcome"] == "pass");
  REQUIRE(j["payload"]["a1"] == "6");
  REQUIRE(j["payload"]["matches_closed_form"] == true);
}

TEST_CASE("torsion subcommand defaults the polygon lengths to the torsion level") {
  CliResult r = run({"torsion", "check", "--a", "2", "--json"});
  REQUIRE(r.code == 0);
  ordered_json j = r.json();
  REQUIRE(j["parameters"]["a"] == 2);
  REQUIRE(j["parameters"]["k1"] == 5);
  REQUIRE(j["parameters"]["k2"] == 5);
  REQUIRE(j["outcome"] == "pass");
  REQUIRE(j["payload"]["projection_kernel"]["kernel_size"] == 25);
}

TEST_CASE("surjectivity subcommand") {
  SECTION("valid parameters yield a full-rank certificate") {
    CliResult r = run({"surjectivity", "--k1", "5", "--k2", "5", "--a", "2", "--s", "0",
                       "--json"});
    REQUIRE(r.code == 0);
    ordered_json j = r.json();
    REQUIRE(j["outcome"] == "pass");
    REQUIRE(j["payload"]["rank"] == 3);
    REQUIRE(j["payload"]["det"] == "-4/5");
  }
  SECTION("incompatible torsion level is a usage error") {
    CliResult r = run({"surjectivity", "--k1", "7", "--k2", "7", "--a", "2", "--json"});
    REQUIRE(r.code == 2);
    ordered_json j = r.json();
    REQUIRE(j["outcome"] == "error");
    std::string msg = j["payload"]["message"].get<std::string>();
    REQUIRE(msg.find("does not divide gcd") != std::string::npos);
    REQUIRE(r.err.find("does not divide gcd") != std::string::npos);
  }
}

TEST_CASE("usage errors exit with code 2") {
  SECTION("unknown subcommand") {
    CliResult r = run({"nonsense"});
    REQUIRE(r.code == 2);
    REQUIRE(r.err.find("error:") != std::string::npos);
  }
  SECTION("missing subcommand") {
    CliResult r = run({});
    REQUIRE(r.code == 2);
  }
  SECTION("invalid multiplicity profile") {
    CliResult r = run({"pch", "dim", "--multiplicity-profile", "bogus"});
    REQUIRE(r.code == 2);
  }
  SECTION("sweep on an unsupported subcommand") {
    CliResult r = run({"genus2", "solve", "--sweep", "k1=3..4", "--json"});
    REQUIRE(r.code == 2);
    REQUIRE(r.json()["payload"]["message"].get<std::string>().find("--sweep") !=
            std::string::npos);
  }
  SECTION("malformed sweep specification") {
    REQUIRE(run({"pch", "dim", "--sweep", "k1=3", "--json"}).code == 2);
    REQUIRE(run({"pch", "dim", "--sweep", "q=3..4", "--json"}).code == 2);
    REQUIRE(run({"pch", "dim", "--sweep", "k1=5..3", "--json"}).code == 2);
    REQUIRE(run({"pch", "dim", "--sweep", "k1=3..4,k1=3..4", "--json"}).code == 2);
  }
}

TEST_CASE("help requests succeed") {
  CliResult r = run({"--help"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("surjectivity") != std::string::npos);
}

TEST_CASE("sweeps enumerate the grid in listed order") {
  CliResult r = run({"pch", "dim", "--sweep", "k1=3..5,k2=3..4", "--json"});
  REQUIRE(r.code == 0);
  ordered_json j = r.json();
  const auto& pts = j["payload"]["points"];
  REQUIRE(pts.size() == 6);
  // First listed range is the outer loop.
  REQUIRE(pts[0]["k1"] == 3);
  REQUIRE(pts[0]["k2"] == 3);
  REQUIRE(pts[1]["k1"] == 3);
  REQUIRE(pts[1]["k2"] == 4);
  REQUIRE(pts[2]["k1"] == 4);
  REQUIRE(pts[2]["k2"] == 3);
  REQUIRE(pts[5]["k1"] == 5);
  REQUIRE(pts[5]["k2"] == 4);
  for (const auto& p : pts) REQUIRE(p["dim"] == 3);

  SECTION("single-variable sweep keeps the other length at its flag value") {
    CliResult one = run({"pch", "dim", "--k2", "6", "--sweep", "k1=3..4", "--json"});
    REQUIRE(one.code == 0);
    ordered_json oj = one.json();
    const auto& q = oj["payload"]["points"];
    REQUIRE(q.size() == 2);
    REQUIRE(q[0]["k1"] == 3);
    REQUIRE(q[0]["k2"] == 6);
    REQUIRE(q[1]["k1"] == 4);
    REQUIRE(q[1]["k2"] == 6);
  }
}

TEST_CASE("JSON output round-trips byte-identically") {
  CliResult r = run({"genus2", "solve", "--r", "5", "--s", "1", "--t", "5", "--json"});
  REQUIRE(r.code == 0);
  ordered_json parsed = ordered_json::parse(r.out);
  REQUIRE(parsed.dump(2) + "\n" == r.out);
}

TEST_CASE("identical invocations produce identical payloads") {
  const std::vector<std::string> args = {"surjectivity", "--k1", "5",  "--k2", "5",
                                         "--a",          "2",  "--s", "1",    "--json"};
  CliResult first = run(args);
  CliResult second = run(args);
  REQUIRE(first.code == 0);
  REQUIRE(second.code == 0);
  ordered_json a = first.json();
  ordered_json b = second.json();
  // Everything except the wall-clock timing must match bit for bit.
  a.erase("elapsed_seconds");
  b.erase("elapsed_seconds");
  REQUIRE(a.dump() == b.dump());
}

TEST_CASE("reports can be written to a file") {
  const auto path = std::filesystem::temp_directory_path() / "chowcert_cli_report.json";
  std::filesystem::remove(path);
  CliResult r = run({"pch", "dim", "--k1", "4", "--k2", "4", "--out", path.string()});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("report written to") != std::string::npos);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  ordered_json j = ordered_json::parse(buf.str());
  REQUIRE(j["payload"]["dim"] == 3);
  std::filesystem::remove(path);
}
