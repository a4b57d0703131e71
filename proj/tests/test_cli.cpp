#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>

#include <json.hpp>

namespace {

struct Out {
  int code = -1;
  std::string text;
};

Out cli(const std::string& args) {
  std::string cmd = std::string(LUSET_CLI) + " " + args + " 2>/dev/null";
  Out o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) o.text.append(buf.data(), n);
  int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string d(const char* f) { return std::string(LUSET_TEST_DATA) + "/" + f; }

}  // namespace

TEST(Cli, SignatureCtr) {
  Out o = cli("signature " + d("ctr.lus") + " --node Ctr");
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.text, "Ctr(α1,α2,α3) ⇒γ β {| γ⊔α1⊔α2⊔α3 ⊑ β |}\n");
}

TEST(Cli, SignatureAsciiJson) {
  Out o = cli("signature " + d("cnt_dn.lus") + " --ascii");
  EXPECT_EQ(o.text, "cnt_dn(a1,a2) =>g b {| g lub a1 lub a2 <= b |}\n");
  auto j = nlohmann::json::parse(cli("signature " + d("ctr.lus") + " --json").text);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[1]["node"], "SpdMtr");
  EXPECT_EQ(j[1]["constraints"].size(), 2u);
}

TEST(Cli, RunCtrTable) {
  Out o = cli("run " + d("ctr.lus") + " --node Ctr --inputs " + d("ctr_table.csv") + " --ticks 7 --by-var");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.text.find("n,1,3,5,8,0,1,4\n"), std::string::npos) << o.text;
  EXPECT_NE(o.text.find("pre_n,0,1,3,5,8,0,1\n"), std::string::npos);
  auto j = nlohmann::json::parse(cli("run " + d("ctr.lus") + " --node Ctr --inputs " + d("ctr_table.csv") + " --json").text);
  EXPECT_EQ(j["ticks"], 7);
  EXPECT_EQ(j["streams"]["n"][3], "8");
}

TEST(Cli, RunRandomIsSeeded) {
  Out a = cli("run " + d("re_trig.lus") + " --ticks 20 --seed 4");
  Out b = cli("run " + d("re_trig.lus") + " --ticks 20 --seed 4");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.text, b.text);
}

TEST(Cli, CheckLeak) {
  Out o = cli("check " + d("leak_ite.lus") + " --lattice two-point --assign " + d("leak_ite.json"));
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.text.find("γ⊔α1 ⊑ β"), std::string::npos) << o.text;
  auto j = nlohmann::json::parse(
      cli("check " + d("leak_ite.lus") + " --assign " + d("leak_ite.json") + " --json").text);
  EXPECT_EQ(j["verdict"], "Insecure");
  EXPECT_EQ(j["nodes"][0]["violated"][0]["constraint"], "γ⊔α1 ⊑ β");
}

TEST(Cli, CheckSecure) {
  EXPECT_EQ(cli("check " + d("ctr.lus") + " --assign " + d("ctr_low.json")).code, 0);
  EXPECT_EQ(cli("check " + d("ctr.lus")).code, 0);
}

TEST(Cli, Normalize) {
  Out o = cli("normalize " + d("re_trig.lus") + " --emit nlustre");
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.text.find("v3 = cnt_dn(edge when ck, n when ck); (* base on ck *)"), std::string::npos) << o.text;
  auto j = nlohmann::json::parse(cli("normalize " + d("cnt_dn.lus") + " --json").text);
  EXPECT_EQ(j["nodes"]["cnt_dn"]["new_locals"].size(), 3u);
  EXPECT_EQ(cli("normalize " + d("cnt_dn.lus") + " --emit c").code, 2);
}

TEST(Cli, NonInterference) {
  EXPECT_EQ(cli("ni " + d("ctr.lus") + " --node Ctr --assign " + d("ctr_low.json") + " --trials 20").code, 0);
  Out skipped = cli("ni " + d("leak_ite.lus") + " --assign " + d("leak_ite.json"));
  EXPECT_EQ(skipped.code, 1);
  EXPECT_NE(skipped.text.find("skipped"), std::string::npos);
  Out forced = cli("ni " + d("leak_merge.lus") + " --assign " + d("leak_merge.json") + " --force --json");
  EXPECT_EQ(forced.code, 1);
  auto j = nlohmann::json::parse(forced.text);
  EXPECT_EQ(j["verdict"], "fail");
  EXPECT_TRUE(j.contains("counterexample"));
  EXPECT_EQ(cli("ni " + d("ctr.lus") + " --node Ctr --level Z").code, 2);
}

TEST(Cli, Preserve) {
  Out o = cli("preserve " + d("re_trig.lus") + " --trials 10 --samples 50 --json");
  EXPECT_EQ(o.code, 0);
  auto j = nlohmann::json::parse(o.text);
  ASSERT_EQ(j.size(), 4u);
  for (const auto& r : j) EXPECT_EQ(r["verdict"], "pass");
}

TEST(Cli, Suite) {
  Out o = cli("suite " + d("cnt_dn.lus") + " --programs 3 --trials 3 --samples 50 --ticks 16");
  EXPECT_EQ(o.code, 0) << o.text;
}

TEST(Cli, UsageAndInputErrors) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("frobnicate x").code, 2);
  EXPECT_EQ(cli("check").code, 2);
  EXPECT_EQ(cli("check /nonexistent.lus").code, 2);
  EXPECT_EQ(cli("run " + d("ctr.lus") + " --node Nope").code, 2);
  EXPECT_EQ(cli("check " + d("ctr.lus") + " --lattice chain:0").code, 2);
  EXPECT_EQ(cli("run " + d("ctr.lus") + " --node SpdMtr --inputs " + d("ctr_table.csv")).code, 2);
}

TEST(Cli, SyntaxErrorLocated) {
  std::string path = testing::TempDir() + "bad.lus";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    std::fputs("node f() returns (x:int);\nlet x = 1 + ; tel\n", f);
    std::fclose(f);
  }
  std::string cmd = std::string(LUSET_CLI) + " check " + path + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string err;
  std::array<char, 512> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) err.append(buf.data(), n);
  int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_NE(err.find("bad.lus:2:"), std::string::npos) << err;
}
