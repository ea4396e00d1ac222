#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "gencoll/gencoll.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using gencoll::cli::json;

namespace {

struct Invocation {
  int code;
  json report;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("gencoll_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    write("ex2.profile", "M 3\nI 1: 2 3\nI 2: 1\nI 3: 1\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }
  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Invocation invoke(std::vector<std::string> args) const {
    args.insert(args.begin(), "gencoll");
    std::ostringstream out, err;
    const int code = gencoll::cli::run(args, out, err);
    json report = code == 0 && !out.str().empty() && out.str()[0] == '{' ? json::parse(out.str()) : json();
    return {code, report, err.str()};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ConstructWritesTheMatrix) {
  const auto r = invoke({"construct", "--links", "3", "--q", "2", "--duty", "1,1,1", "--out", path("s.txt"), "--profile",
                      path("ex2.profile")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["tool"], "gencoll");
  EXPECT_EQ(r.report["results"]["L"], 8);
  EXPECT_EQ(r.report["results"]["C"], json::array({"1/8", "1/4", "1/4"}));
  const auto s = gencoll::parse_matrix(read("s.txt"));
  EXPECT_EQ(s.bits(), gencoll::construct_protocol_matrix({{1, 1, 1}, 2}).bits());
}

TEST_F(Cli, ConstructExpanded) {
  const auto r = invoke({"construct", "--links", "3", "--q", "2", "--duty", "1,1,1", "--expand", "2", "--out",
                      path("s2.txt"), "--profile", path("ex2.profile")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["results"]["L"], 16);
  EXPECT_EQ(r.report["results"]["C_nonsync_guarantee"], json::array({"1/16", "1/8", "1/8"}));
  const auto s = gencoll::parse_matrix(read("s2.txt"));
  EXPECT_EQ(s.num_links(), 3u);
  EXPECT_EQ(s.period(), 16u);
}

TEST_F(Cli, SimulateReportsObservedSubmatrix) {
  ASSERT_EQ(invoke({"construct", "--links", "3", "--q", "2", "--duty", "1,1,1", "--out", path("s.txt")}).code, 0);
  write("d.txt", "1 1 0\n1 2 1\n1 3 2\n2 2 0\n2 1 0\n3 3 0\n3 1 4\n");
  const auto r = invoke({"simulate", "--matrix", path("s.txt"), "--profile", path("ex2.profile"), "--offsets", path("d.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["results"]["mode"], "sync");
  EXPECT_EQ(r.report["results"]["T"], json::array({"1/8", "1/4", "1/4"}));

  const auto g = oracle::three_link_graph();
  const auto s = gencoll::construct_protocol_matrix({{1, 1, 1}, 2});
  const auto d = gencoll::parse_offsets(read("d.txt"), g);
  const auto sub = gencoll::observed_submatrix(s, g, 0, d);
  const auto& rows = r.report["results"]["observed"]["1"]["matrix"];
  ASSERT_EQ(rows.size(), sub.rows());
  for (std::size_t i = 0; i < sub.rows(); ++i)
    for (std::size_t t = 0; t < sub.cols(); ++t) EXPECT_EQ(rows[i].get<std::string>()[t], char('0' + sub(i, t)));
}

TEST_F(Cli, SimulateFractionalOffsets) {
  ASSERT_EQ(invoke({"construct", "--links", "3", "--q", "2", "--duty", "1,1,1", "--out", path("s.txt")}).code, 0);
  write("d.txt", "1 1 0\n1 2 1/2\n1 3 0\n2 2 0\n2 1 0\n3 3 0\n3 1 0\n");
  const auto r = invoke({"simulate", "--matrix", path("s.txt"), "--profile", path("ex2.profile"), "--offsets", path("d.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["results"]["mode"], "nonsync");
  const auto forced = invoke({"simulate", "--matrix", path("s.txt"), "--profile", path("ex2.profile"), "--offsets",
                           path("d.txt"), "--mode", "sync"});
  EXPECT_EQ(forced.code, 1);
}

TEST_F(Cli, MissingOffsetIsAnError) {
  ASSERT_EQ(invoke({"construct", "--links", "3", "--q", "2", "--duty", "1,1,1", "--out", path("s.txt")}).code, 0);
  write("d.txt", "1 1 0\n1 2 1\n2 2 0\n2 1 0\n3 3 0\n3 1 4\n");
  const auto r = invoke({"simulate", "--matrix", path("s.txt"), "--profile", path("ex2.profile"), "--offsets", path("d.txt")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("(1,3)"), std::string::npos) << r.err;
}

TEST_F(Cli, SweepBothModes) {
  ASSERT_EQ(invoke({"construct", "--links", "3", "--q", "2", "--duty", "1,1,1", "--out", path("s.txt")}).code, 0);
  const auto sync = invoke({"sweep", "--matrix", path("s.txt"), "--profile", path("ex2.profile"), "--jobs", "2"});
  ASSERT_EQ(sync.code, 0) << sync.err;
  EXPECT_EQ(sync.report["results"]["worst_case"], json::array({"1/8", "1/4", "1/4"}));
  EXPECT_EQ(sync.report["results"]["offsets_examined"], 80);
  const auto ns = invoke({"sweep", "--matrix", path("s.txt"), "--profile", path("ex2.profile"), "--mode", "nonsync"});
  ASSERT_EQ(ns.code, 0) << ns.err;
  const auto bound = invoke({"sweep", "--matrix", path("s.txt"), "--profile", path("ex2.profile"), "--max-space", "10"});
  EXPECT_EQ(bound.code, 1);
}

TEST_F(Cli, RegionSubcommands) {
  const auto p = path("ex2.profile");
  auto r = invoke({"region", "point", "--duty", "3/8,2/5,2/5", "--profile", p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["results"]["C"], json::array({"27/200", "1/4", "1/4"}));

  r = invoke({"region", "boundary", "--duty", "1/2,1/2,1/2", "--profile", p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["results"]["verdict"], "interior");
  EXPECT_NEAR(r.report["results"]["rho"].get<double>(), (1 + std::sqrt(2.0)) / 2, 1e-11);

  r = invoke({"region", "project", "--duty", "0.5,0.5,0.5", "--profile", p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(r.report["results"]["rho"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(r.report["results"]["C"][0].get<double>(), 2 / std::pow(1 + std::sqrt(2.0), 3), 1e-9);

  r = invoke({"region", "member", "--target", "1,1,1", "--profile", p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["results"]["verdict"], "infeasible");

  r = invoke({"region", "solve", "--targets", "0.25,0.25", "--profile", p});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report["results"]["converged"], true);
  EXPECT_GE(r.report["results"]["objective"].get<double>(), 0.135);
}

TEST_F(Cli, DeterministicResults) {
  const auto p = path("ex2.profile");
  const auto a = invoke({"region", "solve", "--targets", "0.2,0.2", "--profile", p});
  const auto b = invoke({"region", "solve", "--targets", "0.2,0.2", "--profile", p});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.report["results"], b.report["results"]);
  EXPECT_EQ(a.report["inputs"], b.report["inputs"]);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"construct", "--links", "3"}).code, 2);
  write("bad.profile", "M 2\nI 1: 1\n");
  const auto r = invoke({"region", "point", "--duty", "1/2,1/2", "--profile", path("bad.profile")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  write("split.profile", "M 4\nI 1: 2\nI 2: 1\nI 3: 4\nI 4: 3\n");
  EXPECT_EQ(invoke({"region", "point", "--duty", "1/2,1/2,1/2,1/2", "--profile", path("split.profile")}).code, 1);
  EXPECT_EQ(invoke({"region", "point", "--duty", "1/2,1/2,1/2,1/2", "--profile", path("split.profile"),
                 "--allow-disconnected"})
                .code,
            0);
}
