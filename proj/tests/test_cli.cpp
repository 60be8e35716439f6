#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(std::string const& args) {
  std::string cmd = std::string(RAFILTER_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int st = pclose(pipe);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string sample(std::string const& name) { return std::string(RAFILTER_SAMPLES) + "/" + name; }

bool has(std::string const& hay, std::string const& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST(Cli, CheckValidAlgebra) {
  auto r = run("check " + sample("z2.json"));
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "ok\n");
}

TEST(Cli, CheckNamesSymbolAndIndexPath) {
  auto r = run("check " + sample("bad_range.json"));
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "ops.add[1][0] = 2")) << r.out;
}

TEST(Cli, CheckNamesCollidingPair) {
  auto r = run("check " + sample("emb_colliding.json"));
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "identifies elements 0 and 2")) << r.out;
}

TEST(Cli, CheckReportsParsePosition) {
  auto r = run("check " + sample("malformed.json"));
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(has(r.out, "line 4, column 1")) << r.out;
}

TEST(Cli, CheckJson) {
  auto r = run("--json check " + sample("emb_z2_point.json"));
  EXPECT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["valid"], true);
  EXPECT_EQ(j["kind"], "embedding");
}

TEST(Cli, PipelineExitCodes) {
  auto ok = run("pipeline " + sample("emb_z2_point.json"));
  EXPECT_EQ(ok.status, 0) << ok.out;
  EXPECT_TRUE(has(ok.out, "all 7 stages passed"));

  auto diag = run("pipeline " + sample("emb_diagonal.json"));
  EXPECT_EQ(diag.status, 2);
  EXPECT_TRUE(has(diag.out, "stopped at classification"));

  auto z6 = run("pipeline " + sample("emb_z6.json"));
  EXPECT_EQ(z6.status, 2);

  EXPECT_EQ(run("pipeline " + sample("malformed.json")).status, 1);
  EXPECT_EQ(run("pipeline " + sample("z2.json")).status, 1);
  EXPECT_EQ(run("pipeline " + sample("nonexistent.json")).status, 1);
}

TEST(Cli, PipelineJsonRendersMasksBothWays) {
  auto r = run("pipeline --json " + sample("emb_z2_point.json"));
  EXPECT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["passed"], true);
  ASSERT_EQ(j["stages"].size(), 7u);
  auto members = j["stages"][2]["witnesses"]["members"];
  EXPECT_EQ(members[1]["mask"], 3);
  EXPECT_EQ(members[1]["indices"], nlohmann::json({0, 1}));
}

TEST(Cli, AlgebraCommands) {
  auto c = run("congruences " + sample("klein.json"));
  EXPECT_EQ(c.status, 0);
  EXPECT_TRUE(has(c.out, "5 congruences"));
  auto s = run("si " + sample("z4.json"));
  EXPECT_TRUE(has(s.out, "monolith {02|13}")) << s.out;
  auto k = run("--json si " + sample("klein.json"));
  EXPECT_EQ(nlohmann::json::parse(k.out)["subdirectly_irreducible"], false);
}

TEST(Cli, EmbeddingCommands) {
  auto f = run("family " + sample("emb_z6.json"));
  EXPECT_EQ(f.status, 0);
  EXPECT_TRUE(has(f.out, "3 [0,1]"));
  auto c = run("classify " + sample("emb_diagonal.json"));
  EXPECT_TRUE(has(c.out, "decomposable (witness 1 [0])")) << c.out;
  auto n = run("--json classify " + sample("emb_z6.json"));
  EXPECT_EQ(nlohmann::json::parse(n.out)["class"], "neither");

  auto out = std::filesystem::temp_directory_path() / "rafilter_thin.json";
  auto t = run("thin " + sample("emb_diagonal.json") + " --out " + out.string());
  EXPECT_EQ(t.status, 0);
  EXPECT_TRUE(has(t.out, "J0 = 1 [0]"));
  auto back = run("classify " + out.string());
  EXPECT_TRUE(has(back.out, "indecomposable"));
  EXPECT_EQ(run("thin " + sample("emb_z6.json")).status, 1);
}

TEST(Cli, FreeWritesAlgebraAndSidecar) {
  auto dir = std::filesystem::temp_directory_path() / "rafilter_free";
  std::filesystem::create_directories(dir);
  auto out = dir / "free.json";
  auto r = run("free " + sample("semilattice2.json") + " -k 2 --out " + out.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "3 elements"));
  EXPECT_EQ(run("check " + out.string()).status, 0);
  std::ifstream side(dir / "free.generators.json");
  auto j = nlohmann::json::parse(side);
  EXPECT_EQ(j["generators"], nlohmann::json({0, 1}));

  auto cor = run("free " + sample("z2.json") + " -k 1 --corollary");
  EXPECT_EQ(cor.status, 0) << cor.out;
  EXPECT_EQ(run("free " + sample("z4.json") + " -k 2").status, 1);
}

TEST(Cli, RandomIsDeterministicAndOrderIndependent) {
  auto a = run("--json random --seed 42 --count 150");
  auto b = run("--json random --seed 42 --count 150 --jobs 3");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["results"]["lemma"]["passed"], 150);
}

TEST(Cli, RandomSuiteSelection) {
  auto r = run("random --seed 42 --count 100 --suite lemma");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "lemma: 100 passed, 0 failed"));
  EXPECT_FALSE(has(r.out, "theorem"));
  EXPECT_EQ(run("random --suite nope").status, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("frobnicate").status, 1);
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("--max-index-set 1 family " + sample("emb_z6.json")).status, 1);
}
