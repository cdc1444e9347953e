#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gro/diagnostics.hpp"
#include "gro/io.hpp"

using namespace gro;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out, err;
};

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / ("gro_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

CliRun run(const std::string& args, const std::string& env = "") {
  fs::path d = scratch();
  std::string cmd = env + " " + GRO_CLI_PATH + " " + args + " >" + (d / "out").string() + " 2>" + (d / "err").string();
  CliRun r;
  int status = std::system(cmd.c_str());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(d / "out");
  r.err = slurp(d / "err");
  return r;
}

}  // namespace

TEST(Cli, WorkedExample) {
  fs::path t = scratch() / "t.json";
  write(t, R"({"groups":[{"n":2,"ones":2},{"n":2,"ones":0}]})");
  CliRun r = run("test --table " + t.string() + " --prior beta:1,1");
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_NEAR(j["e"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["statistic_kind"], "gro_mic");
  EXPECT_EQ(j["decision"], "continue");
  EXPECT_NEAR(j["post_hoc_level"].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(j["inputs"]["table"]["groups"][0]["n"], 2);
}

TEST(Cli, CsvTableAndOtherStatistics) {
  fs::path t = scratch() / "t.csv";
  write(t, "group_id,n,ones\na,6,5\nb,6,1\n");
  for (std::string stat : {"mic", "pseudo", "can"}) {
    CliRun r = run("test --table " + t.string() + " --statistic " + stat + " --scale 1000");
    ASSERT_EQ(r.code, 0) << stat << r.err;
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["is_evariable"], stat != "pseudo");
    if (stat == "can") {
      EXPECT_TRUE(j.contains("achieved_kl"));
    }
  }
  CliRun p = run("test --table " + t.string() + " --statistic point --palt 0.8,0.2");
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(Json::parse(p.out)["statistic_kind"], "gro_point");
  EXPECT_NE(run("test --table " + t.string() + " --statistic point").code, 0);
}

TEST(Cli, ContinueCombines) {
  CliRun r = run("continue 2.0 3.0 --alpha 0.2");
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_NEAR(j["e"].get<double>(), 6.0, 1e-12);
  EXPECT_EQ(j["decision"], "reject");
}

TEST(Cli, ContinueReadsReportsAndRefusesPseudo) {
  fs::path d = scratch();
  write(d / "t.json", R"({"groups":[{"n":2,"ones":2},{"n":2,"ones":0}]})");
  CliRun a = run("test --table " + (d / "t.json").string());
  write(d / "a.json", a.out);
  CliRun r = run("continue 3.0 --report " + (d / "a.json").string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(Json::parse(r.out)["e"].get<double>(), 6.0, 1e-12);
  CliRun p = run("test --table " + (d / "t.json").string() + " --statistic pseudo --scale 100");
  write(d / "p.json", p.out);
  EXPECT_NE(run("continue --report " + (d / "p.json").string()).code, 0);
}

TEST(Cli, GapMatchesLibraryBitExactly) {
  CliRun r = run("gap --gamma 1 --k 2 --m 50 --scale 10000");
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<PriorSpec> specs(2, PriorSpec::beta(1, 1));
  std::vector<long> sizes{50, 50};
  double lib = gap_r(specs, sizes, pseudo_null_density(specs, sizes, 10000)).r;
  EXPECT_EQ(Json::parse(r.out)["r"].get<double>(), lib);
}

TEST(Cli, OutputIsReproducible) {
  CliRun a = run("epower --sizes 4,6 --prior nml --scale 1000");
  CliRun b = run("epower --sizes 4,6 --prior nml --scale 1000");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  Json j = Json::parse(a.out);
  EXPECT_EQ(j["sandwich_holds"], true);
}

TEST(Cli, ErrorsAreJsonOnStderr) {
  CliRun r = run("test --table /nonexistent/x.json");
  EXPECT_NE(r.code, 0);
  Json j = Json::parse(r.err);
  EXPECT_TRUE(j.contains("error"));
  CliRun u = run("test");
  EXPECT_NE(u.code, 0);
  EXPECT_TRUE(Json::parse(u.err).contains("error"));
  CliRun s = run("sweep --diagnostic nope");
  EXPECT_NE(s.code, 0);
  EXPECT_NE(Json::parse(s.err)["error"].get<std::string>().find("unknown diagnostic"), std::string::npos);
}

TEST(Cli, SweepTsvIndependentOfWorkers) {
  fs::path d = scratch();
  std::string args = "sweep --diagnostic gap_r --ks 2,3 --ms 4,8 --prior uniform --prior nml --scale 500 --tsv ";
  CliRun a = run(args + (d / "a.tsv").string(), "GRO_WORKERS=1");
  CliRun b = run(args + (d / "b.tsv").string(), "GRO_WORKERS=3");
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  std::string ta = slurp(d / "a.tsv"), tb = slurp(d / "b.tsv");
  EXPECT_EQ(ta, tb);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(ta.substr(0, ta.find('\n')), "cell\tregime\tk\tm\tprior\tgap_r");
  EXPECT_EQ(std::count(ta.begin(), ta.end(), '\n'), 9);
}

TEST(Cli, NetTest) {
  fs::path d = scratch();
  write(d / "edges.txt", "1 2\n2 3\n1 3\n");
  write(d / "part.csv", "1,A\n2,A\n3,B\n");
  CliRun r = run("net-test --edges " + (d / "edges.txt").string() + " --partition " + (d / "part.csv").string());
  ASSERT_EQ(r.code, 0) << r.err;
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["inputs"]["groups"], Json({"A~A", "A~B"}));
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  write(d / "bi.csv", "1,1,0\n0,1,1\n");
  CliRun b = run("net-test --biadjacency " + (d / "bi.csv").string());
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(Json::parse(b.out)["table_stats"]["c0"], 4);
}

TEST(Cli, DiagnosticSubcommands) {
  CliRun rp = run("rprime --k 2 --m 10 --scale 1000 --palt 0.5,0.5");
  ASSERT_EQ(rp.code, 0) << rp.err;
  EXPECT_TRUE(Json::parse(rp.out)["r_prime"].is_number());
  CliRun wc = run("rprime --k 2 --m 10 --scale 1000 --worst-case --step 0.1 --lo 0.1 --hi 0.9");
  ASSERT_EQ(wc.code, 0) << wc.err;
  EXPECT_EQ(Json::parse(wc.out)["argmax"].size(), 2u);
  CliRun th = run("theorem1 --prior beta:2,2 --m 400 --bins 20");
  ASSERT_EQ(th.code, 0) << th.err;
  EXPECT_EQ(Json::parse(th.out)["tv"].get<double>(), theorem1_diagnostic(PriorSpec::beta(2, 2), 400, 20).tv);
  CliRun rg = run("regret --gamma 1.5 --palt 0.3,0.7 --ms 10,20,40");
  ASSERT_EQ(rg.code, 0) << rg.err;
  Json c = Json::parse(rg.out)["curves"][0];
  EXPECT_EQ(c["points"].size(), 3u);
  EXPECT_TRUE(c["slope"].is_number());
}
