#include <gtest/gtest.h>

#include <unistd.h>

#include "cli_run.hpp"

namespace {

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(FIXTURES)) out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Cli, ValidateAcceptsValidFile) {
  auto r = cli::run("validate " + cli::fixture("k_two_point.txt"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "valid\n");
}

TEST(Cli, ValidateNamesViolatingPair) {
  auto r = cli::run("validate " + cli::fixture("k_violation.txt"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("violation"), std::string::npos);
  EXPECT_NE(r.out.find("(a)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(b)"), std::string::npos) << r.out;
}

TEST(Cli, ValidateOtherClasses) {
  EXPECT_EQ(cli::run("validate " + cli::fixture("c_two_point.txt") + " --compact " + cli::fixture("compact3.txt")).code, 0);
  EXPECT_EQ(cli::run("validate " + cli::fixture("c_violation.txt") + " --compact " + cli::fixture("compact3.txt")).code, 1);
  EXPECT_EQ(cli::run("validate " + cli::fixture("l_two_point.txt") + " --polish " + cli::fixture("polish3.txt")).code, 0);
  EXPECT_EQ(cli::run("validate " + cli::fixture("l_violation.txt") + " --polish " + cli::fixture("polish3.txt")).code, 1);
  EXPECT_EQ(cli::run("validate " + cli::fixture("oracle_small.txt")).code, 0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli::run("").code, 2);
  EXPECT_EQ(cli::run("frobnicate").code, 2);
  EXPECT_EQ(cli::run("validate").code, 2);
  EXPECT_EQ(cli::run("validate /nonexistent/file").code, 2);
  EXPECT_EQ(cli::run("embed --depth 0").code, 2);
  EXPECT_EQ(cli::run("certify").code, 2);
}

TEST(Cli, CanonicalRoundTrip) {
  for (const auto& name : fixture_names()) {
    auto r = cli::run("validate --canonical " + cli::fixture(name));
    EXPECT_EQ(r.code, 0) << name;
    EXPECT_EQ(r.out, cli::slurp(cli::fixture(name))) << name;
  }
}

TEST(Cli, EmbedIsDeterministic) {
  auto a = cli::run("embed --depth 6 --seed 7");
  auto b = cli::run("embed --depth 6 --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
  EXPECT_NE(cli::run("embed --depth 6 --seed 8").out, a.out);
}

TEST(Cli, CertifyAcceptsAndRejects) {
  cli::TempDir dir("certify");
  ASSERT_EQ(cli::run("embed --depth 5 --seed 3 --out " + dir / "cert.txt").code, 0);
  auto r = cli::run("certify " + dir / "cert.txt");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("verified", 0), 0u) << r.out;
  auto text = cli::slurp(dir / "cert.txt");
  // flip one digit somewhere in the body
  auto pos = text.find_first_of("0123456789", text.size() / 2);
  ASSERT_NE(pos, std::string::npos);
  text[pos] = text[pos] == '9' ? '8' : static_cast<char>(text[pos] + 1);
  cli::spit(dir / "bad.txt", text);
  r = cli::run("certify " + dir / "bad.txt");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("rejected", 0), 0u) << r.out;
}

TEST(Cli, EmbedFileAndOracleLog) {
  cli::TempDir dir("embed");
  auto r = cli::run("embed " + cli::fixture("k_two_point.txt") + " --depth 4 --out " + dir / "c.txt" + " --oracle " +
                    dir / "o.txt");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(cli::run("validate " + dir / "o.txt").code, 0);
  EXPECT_EQ(cli::run("certify " + dir / "c.txt").code, 0);
}

TEST(Cli, GrowAndEval) {
  cli::TempDir dir("grow");
  auto o = dir / "o.txt";
  cli::spit(o, cli::slurp(cli::fixture("oracle_small.txt")));
  auto r = cli::run("eval --oracle " + o + " --pred 2.1 u1 u2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1/2\n");
  cli::spit(dir / "ext.txt",
            "K\nnA 0\nfixed 1\npoint u1\npoint u2\npoint w\nd u1 u2 1/1\nd u1 w 1/1\nd u2 w 1/1\n"
            "p 1 1 u1 0/1\np 1 1 u2 1/1\np 1 1 w 1/2\n");
  r = cli::run("grow " + dir / "ext.txt" + " --oracle " + o + " --map 1.1=1.1");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "grew w 1.1=P1.1\n");
  EXPECT_EQ(cli::run("eval --oracle " + o + " --pred 1.1 w").out, "1/2\n");
  // v at value 0 sits 1/4 from u2 at value 1
  cli::spit(dir / "bad.txt",
            "K\nnA 0\nfixed 1\npoint u1\npoint u2\npoint v\nd u1 u2 1/1\nd u1 v 1/1\nd u2 v 1/4\n"
            "p 1 1 u1 0/1\np 1 1 u2 1/1\np 1 1 v 0/1\n");
  auto before = cli::slurp(o);
  r = cli::run("grow " + dir / "bad.txt" + " --oracle " + o + " --map 1.1=1.1");
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_EQ(cli::slurp(o), before);
}

TEST(Cli, HomogIsDeterministic) {
  auto a = cli::run("homog --depth 4 --seed 5");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, cli::run("homog --depth 4 --seed 5").out);
}
