#include "doctest.h"

#include "wpvol/cli.hpp"
#include "wpvol/poly.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "wpvol");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = wpvol::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

}  // namespace

TEST_CASE("cli: volume latex for the main (0,4) chamber") {
  auto r = cli({"volume", "--g", "0", "--weights", "9/10,9/10,9/10,9/10", "--format", "latex"});
  CHECK(r.code == 0);
  CHECK(trim(r.out) ==
        "2 \\pi^{2} - \\frac{1}{2} \\theta_{1}^{2} - \\frac{1}{2} \\theta_{2}^{2} - \\frac{1}{2} \\theta_{3}^{2} - "
        "\\frac{1}{2} \\theta_{4}^{2}");
}

TEST_CASE("cli: genus one wall-crossing from the main chamber") {
  auto r = cli({"wallcross", "--g", "1", "--n", "2", "--chamber", R"({"light_max":[]})", "--wall", "1,2", "--format",
                "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  wpvol::Poly got = wpvol::poly_from_json(j["poly"]);
  auto ring = got.ring();
  auto x = wpvol::parse_poly("t1+t2-2*pi", ring);
  auto expected = wpvol::parse_poly("1/192", ring) * x * x *
                  (wpvol::parse_poly("8*pi^2", ring) - x * x);
  CHECK(got == expected);
  CHECK(j["wall"] == nlohmann::json::array({1, 2}));

  auto text = cli({"wallcross", "--g", "1", "--n", "2", "--chamber", R"({"light_max":[]})", "--wall", "1,2"});
  CHECK(text.code == 0);
  CHECK(wpvol::parse_poly(trim(text.out), ring) == expected);
}

TEST_CASE("cli: chamber enumerate and classify") {
  auto r = cli({"chamber", "enumerate", "--g", "0", "--n", "4", "--up-to-symmetry", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["count"] == 5);
  CHECK(j["chambers"].size() == 5);

  auto text = cli({"chamber", "enumerate", "--g", "0", "--n", "4", "--up-to-symmetry"});
  CHECK(text.out.rfind("5 chambers\n", 0) == 0);

  auto c = cli({"chamber", "classify", "--g", "0", "--weights", "2/5,2/5,3/4,3/4", "--format", "json"});
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["light_max"] == nlohmann::json::parse("[[1,2]]"));
}

TEST_CASE("cli: eval exact and numeric") {
  auto r = cli({"eval", "--g", "1", "--weights", "1/2"});
  CHECK(r.code == 0);
  CHECK(trim(r.out) == "1/16*pi^2");
  auto n = cli({"eval", "--g", "1", "--weights", "1/2", "--numeric", "--precision", "10"});
  CHECK(n.code == 0);
  CHECK(trim(n.out).rfind("0.61685027", 0) == 0);
}

TEST_CASE("cli: output is deterministic") {
  std::vector<std::string> args{"volume", "--g", "0", "--n", "5", "--weights", "2/5,2/5,2/5,2/5,9/10",
                                "--format", "json"};
  auto a = cli(args);
  auto b = cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j["provenance"]["kind"] == "wall-crossing-path");
  CHECK(nlohmann::json::parse(j.dump()).dump() == j.dump());
}

TEST_CASE("cli: exit codes") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"volume", "--g", "0", "--chamber", "{not json"}).code == 2);
  CHECK(cli({"volume", "--g", "0", "--n", "4", "--chamber", R"({"light_max":[[1,9]]})"}).code == 2);
  CHECK(cli({"volume", "--g", "0", "--weights", "1/2,x"}).code == 2);
  CHECK(cli({"volume", "--g", "0"}).code == 2);
  CHECK(cli({"wallcross", "--g", "0", "--n", "4", "--chamber", R"({"light_max":[]})"}).code == 2);
  CHECK(cli({"volume", "--g", "0", "--weights", "1/2,1/2", "--format", "yaml"}).code == 2);
  CHECK(cli({"verify", "--suite", "nope"}).code == 2);
  // on a wall
  CHECK(cli({"eval", "--g", "0", "--weights", "1/2,1/2,3/4,3/4"}).code == 1);
  // unstable
  CHECK(cli({"eval", "--g", "0", "--weights", "1/2,1/2,1/2,1/2"}).code == 1);
  // S not incident to the chamber
  CHECK(cli({"wallcross", "--g", "0", "--n", "4", "--chamber", R"({"light_max":[[1,2]]})", "--wall", "1,2"}).code ==
        1);
  auto help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}

TEST_CASE("cli: verify paper suite passes and reports json") {
  auto r = cli({"verify", "--suite", "paper", "--format", "json"});
  CHECK(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["failed"] == 0);
  CHECK(j["passed"].get<int>() > 0);
  std::vector<std::string> ids;
  for (const auto& c : j["cases"]) ids.push_back(c["id"]);
  CHECK(std::is_sorted(ids.begin(), ids.end()));
}

TEST_CASE("cli: shifted phi breaks the invariants suite") {
  auto r = cli({"verify", "--suite", "invariants", "--phi-offset", "1", "--format", "json"});
  CHECK(r.code == 1);
  auto j = nlohmann::json::parse(r.out);
  bool continuity_failed = false;
  for (const auto& c : j["cases"])
    if (!c["pass"].get<bool>() && c["id"].get<std::string>().find("continuity") != std::string::npos)
      continuity_failed = true;
  CHECK(continuity_failed);
}

TEST_CASE("cli: cache file round trip") {
  const std::string path = "wpvol_cli_test_cache.txt";
  std::remove(path.c_str());
  auto r = cli({"--cache", path, "volume", "--g", "1", "--n", "2", "--weights", "9/10,9/10"});
  CHECK(r.code == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(std::count(first.begin(), first.end(), ';') == 3);
  auto again = cli({"volume", "--g", "1", "--n", "2", "--weights", "9/10,9/10", "--cache", path});
  CHECK(again.code == 0);
  CHECK(again.out == r.out);
  std::remove(path.c_str());
}
