// End-to-end runs of the command-line tool. Reports are compared against the
// golden files in data/golden with the wall time dropped and paths replaced by
// @DATA@ and @OUT@.
#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "certilab/graph.hpp"
#include "certilab/treedepth.hpp"

namespace certilab {
namespace {

#ifdef CERTILAB_CLI_PATH

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::string kData = CERTILAB_TEST_DATA;

struct CliRun {
  int exit_code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("certilab-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& name) const { return (dir_ / name).string(); }
  static std::string data(const std::string& name) { return kData + "/" + name; }

  CliRun run(const std::string& args) const {
    std::string cmd = std::string("env -u CERTILAB_SEED ") + CERTILAB_CLI_PATH + " " + args + " 2>&1";
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
      return r;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
      r.out.append(buf.data(), got);
    }
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  ordered_json normalized_report(const std::string& path) const {
    std::string text = slurp(path);
    replace_all(text, dir_.string(), "@OUT@");
    replace_all(text, kData, "@DATA@");
    ordered_json j = ordered_json::parse(text);
    j.erase("wall_time_ms");
    return j;
  }

  void expect_golden(const std::string& report, const std::string& golden) const {
    ordered_json expected = ordered_json::parse(slurp(data("golden/" + golden)));
    EXPECT_EQ(normalized_report(report), expected) << normalized_report(report).dump(2);
  }

  static void replace_all(std::string& s, const std::string& from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
      s.replace(pos, from.size(), to);
    }
  }

  fs::path dir_;
};

TEST_F(Cli, CertifyTreedepth) {
  CliRun r = run("--report " + out("r.json") + " certify treedepth --t 2 " + data("p7.json") + " -o " + out("a.json"));
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("global: accept"), std::string::npos);
  expect_golden(out("r.json"), "certify_treedepth_p7.json");
}

TEST_F(Cli, CertifyRefused) {
  CliRun r = run("--report " + out("r.json") + " certify treedepth --t 2 " + data("c8.json"));
  EXPECT_EQ(r.exit_code, 2) << r.out;
  EXPECT_NE(r.out.find("prover refused"), std::string::npos);
  expect_golden(out("r.json"), "certify_treedepth_c8.json");
}

TEST_F(Cli, CertifyFoPipeline) {
  CliRun r = run("--report " + out("r.json") + " certify fo --formula " + data("dom.sexp") + " --t 1 " +
              data("star5.json"));
  EXPECT_EQ(r.exit_code, 0) << r.out;
  expect_golden(out("r.json"), "certify_fo_star5.json");
}

TEST_F(Cli, VerifyHonestAndMutated) {
  ASSERT_EQ(run("certify treedepth --t 2 " + data("p7.json") + " -o " + out("a.json")).exit_code, 0);
  CliRun ok = run("--report " + out("r.json") + " verify treedepth --t 2 " + data("p7.json") + " " + out("a.json"));
  EXPECT_EQ(ok.exit_code, 0) << ok.out;
  expect_golden(out("r.json"), "verify_treedepth_p7.json");

  // Vertex 1 gets vertex 7's certificate.
  auto assignment = ordered_json::parse(slurp(out("a.json")));
  assignment["1"] = assignment["7"];
  std::ofstream(out("bad.json")) << assignment.dump();
  CliRun bad = run("--report " + out("r2.json") + " verify treedepth --t 2 " + data("p7.json") + " " + out("bad.json"));
  EXPECT_EQ(bad.exit_code, 1) << bad.out;
  EXPECT_NE(bad.out.find("reject"), std::string::npos);
  EXPECT_NE(bad.out.find("global: reject"), std::string::npos);
  auto report = normalized_report(out("r2.json"));
  EXPECT_FALSE(report["decisions"]["1"].get<bool>());
}

TEST_F(Cli, VerifyMismatchedVertexSets) {
  ASSERT_EQ(run("certify treedepth --t 2 " + data("p7.json") + " -o " + out("a.json")).exit_code, 0);
  CliRun r = run("verify treedepth --t 2 " + data("p3.json") + " " + out("a.json"));
  EXPECT_EQ(r.exit_code, 3) << r.out;
}

TEST_F(Cli, TreedepthConventions) {
  CliRun r = run("--report " + out("r.json") + " treedepth " + data("p7.json") + " --model-out " + out("m.json") +
              " --cops");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("levels 3 (edge-depth 2)"), std::string::npos) << r.out;
  expect_golden(out("r.json"), "treedepth_p7.json");
  RootedTree model = parse_model(slurp(out("m.json")));
  EXPECT_TRUE(is_model(make_path(7), model));
  EXPECT_EQ(model.height(), 2u);
}

TEST_F(Cli, Ef) {
  CliRun r = run("--report " + out("r.json") + " ef " + data("p3.json") + " " + data("p4.json") + " --k 2");
  EXPECT_EQ(r.exit_code, 1) << r.out;
  EXPECT_NE(r.out.find("not equivalent"), std::string::npos);
  expect_golden(out("r.json"), "ef_p3_p4.json");
  CliRun same = run("ef " + data("p4.json") + " " + data("p4.json") + " --k 3");
  EXPECT_EQ(same.exit_code, 0);
  EXPECT_EQ(same.out.rfind("equivalent", 0), 0u) << same.out;
}

TEST_F(Cli, Modelcheck) {
  CliRun yes = run("--report " + out("r.json") + " modelcheck " + data("star5.json") + " --formula " + data("dom.sexp"));
  EXPECT_EQ(yes.exit_code, 0) << yes.out;
  EXPECT_NE(yes.out.find("true"), std::string::npos);
  expect_golden(out("r.json"), "modelcheck_star5.json");
  CliRun no = run("modelcheck " + data("p4.json") + " --formula '(exists x (forall y (or (= x y) (adj x y))))'");
  EXPECT_EQ(no.exit_code, 1) << no.out;
}

TEST_F(Cli, Kernelize) {
  CliRun r = run("--report " + out("r.json") + " kernelize " + data("star5.json") + " --k 2 --t 1 --graph-out " +
              out("k.json") + " --model-out " + out("km.json"));
  EXPECT_EQ(r.exit_code, 0) << r.out;
  expect_golden(out("r.json"), "kernelize_star5.json");
  Graph kernel = parse_graph(slurp(out("k.json")));
  EXPECT_EQ(kernel.size(), 3u);
  EXPECT_TRUE(is_model(kernel, parse_model(slurp(out("km.json")))));
}

TEST_F(Cli, GadgetHasCopsFive) {
  CliRun r = run("--report " + out("r.json") + " gadget treedepth --n 2 --sa 01 --sb 01 -o " + out("g.json") +
              " --oracle");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  expect_golden(out("r.json"), "gadget_treedepth.json");
  Graph g = parse_graph(slurp(out("g.json")));
  EXPECT_EQ(cops_robber_number(g), 5u);
  auto layout = ordered_json::parse(slurp(out("g.json.layout.json")));
  EXPECT_EQ(layout["r"].get<int>(), 9);
}

TEST_F(Cli, GadgetAutomorphism) {
  CliRun r = run("gadget automorphism --height 2 --sa 1 --sb 0 -o " + out("g.json") + " --oracle");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("fixed-point-free automorphism: no"), std::string::npos) << r.out;
}

TEST_F(Cli, AttackFindsNothingOnNoInstance) {
  CliRun r = run("--report " + out("r.json") + " attack treedepth --t 1 " + data("p4.json") + " --random 2000");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  expect_golden(out("r.json"), "attack_treedepth_p4.json");
}

TEST_F(Cli, TreeAutomatonWithAndWithoutPromise) {
  CliRun promised = run("certify tree-automaton --automaton height:2 --assume-tree " + data("p3.json"));
  EXPECT_EQ(promised.exit_code, 0) << promised.out;
  CliRun composed = run("certify tree-automaton --automaton max-children:2 " + data("c8.json"));
  EXPECT_EQ(composed.exit_code, 2) << composed.out;
  CliRun refused = run("certify tree-automaton --automaton height:1 --assume-tree " + data("p7.json"));
  EXPECT_EQ(refused.exit_code, 2) << refused.out;
}

TEST_F(Cli, BenchCsv) {
  CliRun r = run("bench --scheme treedepth --family path --sizes 10,100 --csv " + out("b.csv"));
  EXPECT_EQ(r.exit_code, 0) << r.out;
  std::string csv = slurp(out("b.csv"));
  EXPECT_EQ(csv.rfind("scheme,family,n,t,max_bits", 0), 0u) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("certify nope " + data("p4.json")).exit_code, 3);
  EXPECT_EQ(run("certify treedepth " + data("missing.json")).exit_code, 3);
  EXPECT_EQ(run("frobnicate").exit_code, 3);
  EXPECT_EQ(run("gadget treedepth --n 2 --sa 111 --sb 0").exit_code, 3);
}

TEST_F(Cli, SeedFromEnvironment) {
  std::string cmd = std::string("CERTILAB_SEED=7 ") + CERTILAB_CLI_PATH + " --report " + out("r.json") +
                    " treedepth " + data("p3.json") + " > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(normalized_report(out("r.json"))["parameters"]["seed"].get<std::uint64_t>(), 7u);
}

#else

TEST(Cli, NotBuilt) { GTEST_SKIP() << "command-line tool not built"; }

#endif

}  // namespace
}  // namespace certilab
