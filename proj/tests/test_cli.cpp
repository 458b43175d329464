// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ria_ibc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = ria::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(RIA_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("plan prints exact dof") {
  const Run r = run({"plan", "--M", "4", "--N", "1"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("b") == 12);
  CHECK(j.at("S") == nlohmann::json::array({3, 1, 1, 6}));
  CHECK(j.at("tau") == 28);
  CHECK(j.at("dof") == nlohmann::json::parse(R"({"num":3,"den":7})"));
  CHECK(nlohmann::json::parse(run({"plan", "--M", "3", "--N", "1"}).out).at("dof") ==
        nlohmann::json::parse(R"({"num":27,"den":71})"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({"plan", "--M", "0", "--N", "1"}).code == 2);
  CHECK(run({"plan", "--M", "4"}).code == 2);
  CHECK(run({"simulate", "--trials", "0"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"sweep", "--rho-start", "2", "--rho-end", "1"}).code == 2);
  CHECK(run({"sweep", "--format", "xml"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("search exhaustion exits 3") {
  const Run r = run({"plan", "--M", "1", "--N", "5", "--smax", "2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("search bound exhausted") != std::string::npos);
}

TEST_CASE("simulate writes CampaignStats and is byte-reproducible") {
  const Run a = run({"simulate", "--trials", "6", "--seed", "3", "--out", tmp("sim_a.json")});
  const Run b = run({"simulate", "--trials", "6", "--seed", "3", "--out", tmp("sim_b.json")});
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  const std::string text = slurp(tmp("sim_a.json"));
  CHECK(text == slurp(tmp("sim_b.json")));
  const auto j = nlohmann::json::parse(text);
  CHECK(j.at("trials") == 6);
  CHECK(j.at("successes") == 6);
  CHECK(j.at("dof") == nlohmann::json::parse(R"({"num":3,"den":7})"));
  CHECK(j.at("failures").empty());
}

TEST_CASE("simulate with a broken scheme exits 1 and lists seeds") {
  const Run r = run({"simulate", "--trials", "2", "--seed", "7", "--fault", "phase3-sign"});
  CHECK(r.code == 1);
  CHECK(r.err.find("7 8") != std::string::npos);
}

TEST_CASE("sweep CSV file") {
  const Run r = run({"sweep", "--rho-start", "0.25", "--rho-end", "4.5", "--step", "0.05", "--out",
                     tmp("sweep.csv")});
  CHECK(r.code == 0);
  std::istringstream in(slurp(tmp("sweep.csv")));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 87);
  CHECK(lines.front() == "rho,proposed,previous,outer,no_csit");
  CHECK(std::find(lines.begin(), lines.end(), "4.0,0.428571428571,0.4,0.48,0.25") != lines.end());
  CHECK(lines[1].rfind("0.25,,", 0) == 0);
  CHECK(run({"sweep", "--format", "json"}).out.find("\"no_csit\"") != std::string::npos);
}

TEST_CASE("unwritable output exits 4") {
  CHECK(run({"sweep", "--out", "/nonexistent-dir/x.csv"}).code == 4);
  CHECK(run({"plan", "--M", "4", "--N", "1", "--out", "/nonexistent-dir/p.json"}).code == 4);
}

TEST_CASE("audit") {
  const Run ok = run({"audit", "--seed", "4"});
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out).at("queries") == 48);
  const Run bad = run({"audit", "--seed", "4", "--fault", "phase2-csi"});
  CHECK(bad.code == 1);
  CHECK(nlohmann::json::parse(bad.out).at("violations") == 1);
  CHECK(bad.err.find("phase2_precoders") != std::string::npos);
}

TEST_CASE("verify lists every criterion and exits by their verdicts") {
  const Run r = run({"verify"});
  std::istringstream in(r.out);
  int lines = 0, fails = 0;
  for (std::string line; std::getline(in, line);) {
    ++lines;
    CHECK(line.find("measured:") != std::string::npos);
    CHECK(line.find("expected:") != std::string::npos);
    if (line.rfind("[FAIL]", 0) == 0) ++fails;
  }
  CHECK(lines == 8);
  CHECK(r.code == (fails == 0 ? 0 : 1));
  CHECK(r.out.find("[PASS] 2 ") != std::string::npos);
}

TEST_CASE("verify with a phase-3 sign error fails the stage-count criterion") {
  const Run r = run({"verify", "--fault", "phase3-sign"});
  CHECK(r.code == 1);
  CHECK(r.out.find("[FAIL] 2 ") != std::string::npos);
}
