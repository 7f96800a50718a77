#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  json doc;
};

// Runs the tool with stderr discarded; parses stdout when it is JSON.
Run crn_bkk(const std::string& args) {
  Run r;
  const std::string cmd = std::string(CRN_BKK_BINARY) + " " + args + " --no-timing 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (!r.out.empty()) r.doc = json::parse(r.out, nullptr, false);
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "crn_bkk_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, EnvelopeAndDeterminism) {
  const auto a = crn_bkk("mv --family pc --n 2 --seed 3");
  const auto b = crn_bkk("mv --family pc --n 2 --seed 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.doc["command"], "mv");
  EXPECT_EQ(a.doc["seed"], 3);
  EXPECT_EQ(a.doc["elapsed_ms"], 0);
  EXPECT_TRUE(a.doc.contains("tool_version"));
  EXPECT_EQ(a.doc["result"]["mixed_volume"], 8);
}

TEST(Cli, Table1SmallRanges) {
  const auto r = crn_bkk("table1 --max-cd 5 --max-e 2 --max-pc 2");
  ASSERT_EQ(r.code, 0);
  ASSERT_TRUE(r.doc["result"]["pass"].get<bool>());
  bool saw_cd4 = false, saw_pc1 = false;
  for (const auto& row : r.doc["result"]["rows"]) {
    if (row["family"] == "cd" && row["n"] == 4) {
      saw_cd4 = true;
      EXPECT_EQ(row["bezout"]["computed"], 4);
      EXPECT_EQ(row["mv"]["computed"], 2);
      EXPECT_EQ(row["ssd"]["computed"], 4);
    }
    if (row["family"] == "pc" && row["n"] == 1) {
      saw_pc1 = true;
      EXPECT_EQ(row["bezout"]["computed"], 16);
      EXPECT_EQ(row["mv"]["computed"], 4);
      EXPECT_EQ(row["mv"]["oracle"], 4);
      EXPECT_EQ(row["ssd"]["computed"], 3);
    }
  }
  EXPECT_TRUE(saw_cd4);
  EXPECT_TRUE(saw_pc1);
}

TEST(Cli, VerifyCertificateRoundTrip) {
  const auto path = scratch("e1.json");
  ASSERT_EQ(crn_bkk("mv --family e --n 1 --json " + path.string()).code, 0);
  auto ok = crn_bkk("verify-certificate --file " + path.string());
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(ok.doc["result"]["ok"].get<bool>());
  EXPECT_EQ(ok.doc["result"]["total"], 3);

  json cert;
  std::ifstream(path) >> cert;
  auto& cells = cert["result"]["certificate"]["cells"];
  const std::size_t last = cells.size() - 1;
  cells[last]["volume"] = 5;
  const auto bad = scratch("e1_bad.json");
  std::ofstream(bad) << cert.dump();
  const auto r = crn_bkk("verify-certificate --file " + bad.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.doc["result"]["ok"].get<bool>());
  EXPECT_EQ(r.doc["result"]["bad_cell"], last);

  // A bare certificate is accepted too.
  const auto pc2 = crn_bkk("mv --family pc --n 2");
  const auto bare = scratch("pc2_bare.json");
  std::ofstream(bare) << pc2.doc["result"]["certificate"].dump();
  const auto v = crn_bkk("verify-certificate --file " + bare.string());
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.doc["result"]["total"], 8);

  const auto junk = scratch("junk.json");
  std::ofstream(junk) << "{\"kind\": \"mixed\"";
  EXPECT_EQ(crn_bkk("verify-certificate --file " + junk.string()).code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(crn_bkk("mv --family pc --n 5").code, 3);
  EXPECT_EQ(crn_bkk("ssd --family pc --n 3").code, 3);
  EXPECT_EQ(crn_bkk("table1 --max-e 7").code, 3);
  EXPECT_EQ(crn_bkk("mv --family nope --n 2").code, 2);
  EXPECT_EQ(crn_bkk("mv --family cd").code, 2);
  EXPECT_EQ(crn_bkk("mv").code, 2);
  EXPECT_EQ(crn_bkk("").code, 2);
  EXPECT_EQ(crn_bkk("mv --family cd --n 4 --bogus").code, 2);
}

TEST(Cli, FamilyCommands) {
  const auto g = crn_bkk("generate --family e --n 2");
  ASSERT_EQ(g.code, 0);
  EXPECT_EQ(g.doc["result"]["species"].size(), 4u);

  const auto s = crn_bkk("system --family cd --n 4 --seed 9");
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(s.doc["result"]["system"]["vars"].size(), 2u);
  EXPECT_EQ(s.doc["result"]["system"]["tags"], json({"f_1", "f_2"}));
  EXPECT_EQ(s.doc["result"]["parameters"]["seed"], 9);

  EXPECT_EQ(crn_bkk("bezout --family e --n 3").doc["result"]["bezout"], 16);
  EXPECT_EQ(crn_bkk("nvolume --family pc --n 3").doc["result"]["normalized_volume"], 13);

  const auto t = crn_bkk("triangulate --family pc --n 2");
  EXPECT_EQ(t.code, 0);
  EXPECT_EQ(t.doc["result"]["simplices"], 8);
  EXPECT_TRUE(t.doc["result"]["unimodular"].get<bool>());

  const auto h = crn_bkk("hrep --family pc --n 3");
  EXPECT_EQ(h.code, 0);
  EXPECT_EQ(h.doc["result"]["polytope"]["facets"].size(), 16u);

  const auto c = crn_bkk("chen --family e --n 1");
  ASSERT_EQ(c.code, 0);
  EXPECT_FALSE(c.doc["result"]["reports"][0]["holds"].get<bool>());
  EXPECT_TRUE(c.doc["result"]["reports"][1]["holds"].get<bool>());

  const auto d = crn_bkk("ssd --family e --n 3");
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.doc["result"]["report"]["total"], 3);
  EXPECT_EQ(d.doc["result"]["report"]["eliminant"].size(), 4u);
  const auto dg = crn_bkk("ssd --family cd --n 5 --method groebner");
  EXPECT_EQ(dg.doc["result"]["report"]["toric"], 3);

  const auto m = crn_bkk("matching-check --n 2");
  EXPECT_EQ(m.code, 0);
  EXPECT_EQ(m.doc["result"]["checks"][0]["graph_json"]["vertices"], 5);
  EXPECT_EQ(m.doc["result"]["checks"][0]["graph_json"]["edges"].size(), 9u);
}

TEST(Cli, NetworkFileInput) {
  const auto path = scratch("net.txt");
  std::ofstream(path) << "species: A, B\nA + B -> 2B [k1]\n2B -> A + B [k2]\n";
  const auto r = crn_bkk("system --file " + path.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.doc["result"]["input"], "file");
  EXPECT_EQ(r.doc["result"]["system"]["vars"], json({"x_A", "x_B"}));
  const auto b = crn_bkk("bezout --file " + path.string());
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(b.doc["result"]["bezout"], 2);

  EXPECT_EQ(crn_bkk("bezout --family cd --n 3 --file " + path.string()).code, 2);
  EXPECT_EQ(crn_bkk("bezout --file /nonexistent/net.txt").code, 2);
}
