#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using nlohmann::ordered_json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = expsumcli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "expsum_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << text;
  file.close();
  return path.string();
}

const std::string& counterexample_path() {
  static const std::string path = write_file("lift.json", R"({
    "terms": [
      {"c": 1, "t": 20.085536923187668},
      {"c": -6, "t": 7.38905609893065},
      {"c": 11, "t": 2.718281828459045},
      {"c": -6, "t": 1}
    ]
  })");
  return path;
}

const std::string& table1_path() {
  static const std::string path = write_file("table1.json", R"({
    "terms": [
      {"c": 8, "t": 0.9}, {"c": -6, "t": 0.8},
      {"c": -4, "t": 0.6}, {"c": -3, "t": 0.5}
    ]
  })");
  return path;
}

const std::string& schedule_path() {
  static const std::string path = write_file("schedule.json", R"({
    "begin_value": 100, "end_value": 110, "horizon": 1
  })");
  return path;
}

}  // namespace

TEST_CASE("analyze reports the counterexample roots") {
  const auto result =
      run({"analyze", counterexample_path(), "--window=-2:3"});
  REQUIRE(result.code == 0);
  CHECK(result.err.empty());
  const ordered_json document = ordered_json::parse(result.out);
  CHECK(document["command"] == "analyze");
  REQUIRE(document["report"]["roots"].size() == 3);
  CHECK(std::fabs(document["report"]["roots"][1].get<double>() -
                  std::log(2.0)) <= 1e-8);
  CHECK(document["report"]["sign_change_bound"] == 3);
}

TEST_CASE("analyze falls back to the document window") {
  const std::string path = write_file("windowed.json", R"({
    "terms": [{"c": 2, "t": 0.9}, {"c": -1, "t": 0.5}],
    "window": [-2, 2]
  })");
  const auto result = run({"analyze", path});
  REQUIRE(result.code == 0);
  const ordered_json document = ordered_json::parse(result.out);
  CHECK(document["report"]["window"][0] == -2.0);
  CHECK(document["report"]["window"][1] == 2.0);
  // The pair's zero sits at -1.179, inside the document window.
  REQUIRE(document["report"]["roots"].size() == 1);
}

TEST_CASE("sync emits the adjusted coefficients") {
  const auto result = run({"sync", table1_path(), "--point", "zero",
                           "--at", "5"});
  REQUIRE(result.code == 0);
  const ordered_json document = ordered_json::parse(result.out);
  const ordered_json& r = document["report"];
  CHECK(r["adjusted_side"] == "pi");
  CHECK(r["sync_point"] == 5.0);
  REQUIRE(r["adjusted_coefficients"].size() == 3);
  const double expected[3] = {3.32957, 0.526749, 0.158766};
  for (int i = 0; i < 3; ++i) {
    CHECK(std::fabs(r["adjusted_coefficients"][i].get<double>() -
                    expected[i]) <= 1e-4);
  }
  REQUIRE(r["residuals"].size() == 1);
  CHECK(std::fabs(r["residuals"][0]["c"].get<double>() - 3.984915) <= 1e-4);
  CHECK(r["residuals"][0]["t"] == 0.9);
}

TEST_CASE("sync picks its own point and honors --side") {
  const auto result = run({"sync", table1_path(), "--point", "extremum",
                           "--side", "mi"});
  REQUIRE(result.code == 0);
  const ordered_json document = ordered_json::parse(result.out);
  const ordered_json& r = document["report"];
  CHECK(r["adjusted_side"] == "mi");
  CHECK(r["point_kind"] == "extremum");
  // The report must still reconstruct the original sum exactly.
  for (const double k : {0.0, 2.5, 7.0}) {
    double rebuilt = 0.0;
    for (const auto& pair : r["synchronized"]) {
      rebuilt += pair["c_p"].get<double>() *
                     std::pow(pair["t_p"].get<double>(), k) -
                 pair["c_m"].get<double>() *
                     std::pow(pair["t_m"].get<double>(), k);
    }
    for (const char* key : {"residuals", "passthrough_terms"}) {
      for (const auto& term : r[key]) {
        rebuilt +=
            term["c"].get<double>() * std::pow(term["t"].get<double>(), k);
      }
    }
    const double original = oracle::eval_terms(
        {{8, 0.9}, {-6, 0.8}, {-4, 0.6}, {-3, 0.5}}, k);
    CHECK(std::fabs(rebuilt - original) <= 1e-9 * (1.0 + std::fabs(original)));
  }
}

TEST_CASE("split distributes the shared negative term") {
  const std::string path = write_file("split.json", R"({
    "terms": [
      {"c": 2.5, "t": 0.9}, {"c": 1.2, "t": 0.8},
      {"c": 0.4, "t": 0.6}, {"c": 0.35, "t": 0.5},
      {"c": -2, "t": 0.1}
    ]
  })");
  const auto result = run({"split", path, "--point", "inflection"});
  REQUIRE(result.code == 0);
  const ordered_json document = ordered_json::parse(result.out);
  const ordered_json& r = document["report"];
  CHECK(std::fabs(r["common_point"].get<double>() - 1.850672623) <= 1e-6);
  CHECK(std::fabs(r["mi_total"].get<double>() - 2.0) <= 1e-9);
  CHECK(r["pairs"].size() == 4);
}

TEST_CASE("split rejects documents without a unique negative term") {
  const std::string path = write_file("split_bad.json", R"({
    "terms": [{"c": 1, "t": 0.9}, {"c": -1, "t": 0.5}, {"c": -1, "t": 0.3}]
  })");
  const auto result = run({"split", path, "--point", "zero"});
  CHECK(result.code == 3);
  CHECK(result.err.find("negative term") != std::string::npos);
}

TEST_CASE("sync surfaces infeasible points as runtime failures") {
  const auto result = run({"sync", table1_path(), "--point", "zero",
                           "--at", "1e8"});
  CHECK(result.code == 3);
  CHECK(!result.err.empty());
}

TEST_CASE("irr solves a schedule document") {
  const auto result = run({"irr", schedule_path()});
  REQUIRE(result.code == 0);
  const ordered_json document = ordered_json::parse(result.out);
  REQUIRE(document["report"]["rates"].size() == 1);
  CHECK(std::fabs(document["report"]["rates"][0].get<double>() - 0.10) <=
        1e-12);
  CHECK(document["report"]["exceeds_bound"] == false);
}

TEST_CASE("irr rejects term documents") {
  const auto result = run({"irr", table1_path()});
  CHECK(result.code == 2);
  CHECK(result.err.find("schedule") != std::string::npos);
}

TEST_CASE("sample tabulates terms, derivatives, and schedules") {
  const std::string path = write_file("sample.json", R"({
    "terms": [{"c": 2, "t": 0.9}, {"c": -1, "t": 0.5}]
  })");
  const auto grid = run({"sample", path, "--from", "0", "--to", "5",
                         "--step", "1"});
  REQUIRE(grid.code == 0);
  std::size_t lines = 0;
  for (const char c : grid.out) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 7);  // header plus six rows
  CHECK(grid.out.rfind("k,value\n0,1\n", 0) == 0);

  const auto single = run({"sample", path, "--from", "2", "--to", "2",
                           "--step", "1"});
  REQUIRE(single.code == 0);
  lines = 0;
  for (const char c : single.out) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 2);

  const auto derivative = run({"sample", path, "--from", "0", "--to", "0",
                               "--step", "1", "--derivative", "1"});
  REQUIRE(derivative.code == 0);
  const double expected = 2.0 * std::log(0.9) - std::log(0.5);
  const std::string row = derivative.out.substr(derivative.out.find('\n') + 1);
  CHECK(std::fabs(std::stod(row.substr(row.find(',') + 1)) - expected) <=
        1e-15);

  const auto schedule = run({"sample", schedule_path(), "--from", "0",
                             "--to", "0.2", "--step", "0.1"});
  REQUIRE(schedule.code == 0);
  CHECK(schedule.out.rfind("k,value\n0,100\n", 0) == 0);

  const auto bad = run({"sample", schedule_path(), "--from", "0", "--to",
                        "1", "--step", "0.5", "--derivative", "1"});
  CHECK(bad.code == 2);

  CHECK(run({"sample", path, "--from", "1", "--to", "0", "--step", "1"})
            .code == 2);
  CHECK(run({"sample", path, "--from", "0", "--to", "1", "--step", "0"})
            .code == 2);
}

TEST_CASE("malformed or missing input exits with a parse failure") {
  const std::string bad = write_file("bad.json", "{\"terms\": [");
  CHECK(run({"analyze", bad}).code == 2);
  CHECK(run({"analyze", (scratch_dir() / "missing.json").string()}).code == 2);
  const std::string wrong = write_file("wrong.json", R"({"terms": "x"})");
  CHECK(run({"analyze", wrong}).code == 2);
}

TEST_CASE("claimcheck is byte-identical under a fixed seed") {
  const auto first = run({"claimcheck", "--trials", "100", "--seed", "42"});
  const auto second = run({"claimcheck", "--trials", "100", "--seed", "42"});
  REQUIRE(first.code == 0);
  REQUIRE(second.code == 0);
  CHECK(first.out == second.out);
  const ordered_json document = ordered_json::parse(first.out);
  CHECK(document["input"]["trials"] == 100);
  CHECK(document["input"]["seed"] == 42);
  CHECK(document["report"].size() == 600);
}

TEST_CASE("claimcheck defaults to zero trials with an explicit instance") {
  const auto result = run({"claimcheck", "--in", counterexample_path()});
  REQUIRE(result.code == 0);
  const ordered_json document = ordered_json::parse(result.out);
  CHECK(document["input"]["trials"] == 0);
  CHECK(document["input"].contains("instance"));
  REQUIRE(document["report"].size() == 3);
  CHECK(document["report"][2]["claim"] == "corollary5");
  CHECK(document["report"][2]["violated"] == true);
  CHECK(document["report"][2]["measured"]["roots"] == 3);
}

TEST_CASE("claimcheck seed precedence prefers the flag") {
  const std::string path = write_file("seeded.json", R"({
    "terms": [{"c": 2, "t": 0.9}, {"c": -1, "t": 0.5}], "seed": 5
  })");
  const auto doc_seed = run({"claimcheck", "--in", path, "--trials", "1"});
  REQUIRE(doc_seed.code == 0);
  CHECK(ordered_json::parse(doc_seed.out)["input"]["seed"] == 5);

  const auto flag_seed =
      run({"claimcheck", "--in", path, "--trials", "1", "--seed", "9"});
  REQUIRE(flag_seed.code == 0);
  CHECK(ordered_json::parse(flag_seed.out)["input"]["seed"] == 9);

  setenv("EXPSUM_SEED", "7", 1);
  const auto env_seed = run({"claimcheck", "--trials", "1"});
  unsetenv("EXPSUM_SEED");
  REQUIRE(env_seed.code == 0);
  CHECK(ordered_json::parse(env_seed.out)["input"]["seed"] == 7);

  setenv("EXPSUM_SEED", "bogus", 1);
  const auto bad_env = run({"claimcheck", "--trials", "1"});
  unsetenv("EXPSUM_SEED");
  CHECK(bad_env.code == 2);
}

TEST_CASE("help and usage errors use the reserved exit codes") {
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("analyze") != std::string::npos);

  CHECK(run({"unknown"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"sync", table1_path()}).code == 2);  // missing --point
  CHECK(run({"analyze"}).code == 2);              // missing input
  const auto side = run({"sync", table1_path(), "--point", "zero",
                         "--side", "down"});
  CHECK(side.code == 2);
}

TEST_CASE("mutated inputs never escape the exit code contract") {
  const std::string base = R"({
    "terms": [{"c": 2, "t": 0.9}, {"c": -1, "t": 0.5}],
    "window": [-5, 5], "tol": 1e-10
  })";
  oracle::Rng rng(97);
  const std::string alphabet = "0123456789eE+-.,:[]{}\"ct ";
  for (int i = 0; i < 200; ++i) {
    std::string text = base;
    const std::size_t edits = 1 + rng.below(4);
    for (std::size_t e = 0; e < edits; ++e) {
      const std::size_t at = rng.below(text.size());
      switch (rng.below(3)) {
        case 0:
          text[at] = alphabet[rng.below(alphabet.size())];
          break;
        case 1:
          text.erase(at, 1);
          break;
        default:
          text.insert(at, 1, alphabet[rng.below(alphabet.size())]);
          break;
      }
    }
    const std::string path = write_file("fuzz.json", text);
    const auto result = run({"analyze", path});
    const bool allowed =
        result.code == 0 || result.code == 2 || result.code == 3;
    CHECK(allowed);
  }
}
