#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "generators.hpp"

namespace gen = paramsub::testing;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = paramsub::cli::run(args, out, err);
  return Run{code, out.str(), err.str()};
}

std::string corpus(const char* name) { return gen::corpus_dir() + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("paramsub_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

TEST(Cli, CheckCountsDefinitions) {
  auto r = run({"check", corpus("nat.poly")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok, 4 definitions (1 internal)\n");
  EXPECT_EQ(run({"check", temp_file("empty.poly", "")}).out, "ok, 0 definitions\n");
}

TEST(Cli, CheckEmitsNormalForm) {
  auto r = run({"check", corpus("nat.poly"), "--emit-normal"});
  EXPECT_NE(r.out.find("type %g1 = 1\n"), std::string::npos) << r.out;
}

TEST(Cli, ErrorsExitTwoWithLocation) {
  auto file = temp_file("cycle.poly", "abbrev a = b\nabbrev b = a\n");
  auto r = run({"check", file});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err, file + ":1:1: recursive abbreviation: abbreviation cycle a -> b -> a\n");
  EXPECT_EQ(run({"check", "/nonexistent/file.poly"}).code, 2);
  EXPECT_EQ(run({"query", corpus("nat.poly"), "nat <= bogus"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, RulesLines) {
  auto r = run({"rules", corpus("stack.poly"), "--pair", "stack", "qstack1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "stack[a] <= qstack1[b] if a <= b, b <= a\n");
  auto both = run({"rules", corpus("nat.poly"), "--pair", "nat", "even", "--variance", "both"});
  EXPECT_EQ(both.out,
            "nat </= even (⊕⊕: label set {s, z} is not within {s})\n"
            "nat >= even\n");
}

TEST(Cli, RulesShowVariancePerParameter) {
  EXPECT_EQ(run({"rules", corpus("trees.poly"), "--pair", "treefn", "treefn"}).out,
            "treefn[a, b] <= treefn[a', b'] if b <= b', a' <= a\n");
  EXPECT_EQ(run({"rules", corpus("stree.poly"), "--pair", "stree", "stree"}).out,
            "stree[a, k] <= stree[a', k'] if a <= a', k <= k'\n");
}

TEST(Cli, RulesCoverEveryUserPair) {
  auto r = run({"rules", corpus("nat.poly")});
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 9);
}

TEST(Cli, RulesJson) {
  auto r = run({"rules", corpus("cfl.poly"), "--pair", "e", "d", "--json"});
  auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j[0]["valid"], true);
  EXPECT_EQ(j[0]["atoms"][0]["left"], "k");
  EXPECT_EQ(j[0]["atoms"][0]["right"], "k'");
  EXPECT_EQ(j[0]["atoms"][0]["variance"], "+");
  EXPECT_EQ(j[0]["text"], "e[k] <= d[k'] if k <= k'");
}

TEST(Cli, QueryExitCodes) {
  auto yes = run({"query", corpus("cfl.poly"), "e0 <= d0"});
  EXPECT_EQ(yes.code, 0);
  EXPECT_EQ(yes.out, "Yes\n");
  auto no = run({"query", corpus("cfl.poly"), "d0 <= e0"});
  EXPECT_EQ(no.code, 1);
  EXPECT_EQ(no.out, "No (structural violation)\n");
  EXPECT_EQ(run({"query", corpus("trees.poly"), "tree[nat] <= tree[nat]"}).code, 0);
}

TEST(Cli, QueryJson) {
  auto r = run({"query", corpus("nat.poly"), "nat <= even", "--json"});
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "no");
  EXPECT_EQ(j["reason"], "structural violation");
  EXPECT_EQ(j["trace"]["rule"], "variant-labels");
  EXPECT_EQ(j["path"], json::array({"unfold", ".s", "unfold"}));
  auto y = json::parse(run({"query", corpus("nat.poly"), "even <= nat", "--json"}).out);
  EXPECT_EQ(y["verdict"], "yes");
  EXPECT_EQ(y["derivation_nodes"], 1);
}

TEST(Cli, FactsJsonShape) {
  auto j = json::parse(run({"facts", corpus("nat.poly"), "--pair", "even", "nat"}).out);
  for (const auto& p : j["pairs"]) {
    for (const char* key : {"left", "right", "variance", "bottom", "facts", "processed", "bound"}) {
      EXPECT_TRUE(p.contains(key)) << key;
    }
    EXPECT_NE(p.contains("constraints"), p["bottom"].get<bool>());
    EXPECT_LE(p["processed"].get<int>(), p["bound"].get<int>());
  }
  auto quiet = run({"facts", corpus("nat.poly"), "--no-traces"});
  EXPECT_EQ(quiet.out.find("bottom_trace"), std::string::npos);
}

TEST(Cli, FactsIgnoreTheSeed) {
  auto base = run({"facts", corpus("cfl.poly"), "--no-traces"});
  for (const char* seed : {"1", "2", "99"}) {
    EXPECT_EQ(run({"facts", corpus("cfl.poly"), "--no-traces", "--seed", seed}).out, base.out);
  }
}

TEST(Cli, TinyFuelIsAnError) {
  auto r = run({"facts", corpus("cfl.poly"), "--max-facts", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("fuel"), std::string::npos) << r.err;
}

TEST(Cli, Oracles) {
  auto refuted = run({"oracle", "structural", corpus("nat.poly"), "nat <= even", "--depth", "3"});
  EXPECT_EQ(refuted.code, 1);
  EXPECT_EQ(refuted.out, "violation at depth 2: unfold .s unfold (⊕⊕: label set {s, z} is not within {s})\n");
  auto clear = run({"oracle", "structural", corpus("snat.poly"), "nat <= snat[one]", "--depth", "20"});
  EXPECT_EQ(clear.code, 0);
  EXPECT_EQ(clear.out, "no counterexample within 20 unfoldings\n");
  auto param = run({"oracle", "parametric", corpus("snat.poly"), "nat <= snat[one]", "--depth", "3", "--json"});
  EXPECT_EQ(param.code, 1);
  EXPECT_EQ(json::parse(param.out)["result"], "violation");
}

TEST(Cli, BpaEncode) {
  auto file = temp_file("x.bpa", "X = a.eps\n");
  auto r = run({"bpa", "encode", file});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("type tX[al] = &{a: al}\n"), std::string::npos) << r.out;
  auto v = run({"bpa", "encode", file, "--flavor", "variant"});
  EXPECT_NE(v.out.find("type tX[al] = +{a: al}\n"), std::string::npos) << v.out;
  EXPECT_EQ(run({"bpa", "encode", temp_file("bad.bpa", "X = a.Q\n")}).code, 2);
}

TEST(Cli, EncodedSystemsAnswerSimulationQueries) {
  auto bpa = temp_file("xy.bpa", "X = a.eps + b.eps\nY = a.eps\n");
  auto poly = temp_file("xy.poly", run({"bpa", "encode", bpa}).out);
  EXPECT_EQ(run({"query", poly, "tX[t] <= tY[t]"}).code, 0);
  EXPECT_EQ(run({"query", poly, "tY[t] <= tX[t]"}).code, 1);
}

std::string golden(const char* name) {
  std::ifstream in(std::string(PARAMSUB_GOLDEN_DIR) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(CliGolden, JsonOutputs) {
  struct Case {
    const char* file;
    std::vector<std::string> args;
  };
  const std::vector<Case> cases{
      {"query_nat_even.json", {"query", corpus("nat.poly"), "nat <= even", "--json"}},
      {"rules_e_d.json", {"rules", corpus("cfl.poly"), "--pair", "e", "d", "--json"}},
      {"facts_even_nat.json", {"facts", corpus("nat.poly"), "--pair", "even", "nat"}},
      {"oracle_nat_even.json", {"oracle", "structural", corpus("nat.poly"), "nat <= even", "--depth", "3", "--json"}},
  };
  for (const auto& c : cases) {
    auto expected = golden(c.file);
    ASSERT_FALSE(expected.empty()) << c.file;
    auto out = run(c.args).out;
    EXPECT_EQ(out, expected) << c.file;
    EXPECT_EQ(nlohmann::ordered_json::parse(out).dump(2) + "\n", out) << c.file;
  }
}

}  // namespace
