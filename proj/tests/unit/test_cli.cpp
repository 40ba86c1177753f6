#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "app.hpp"

using namespace nhminor;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string log;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, log;
  const int code = cli::run(args, out, log);
  return {code, out.str(), log.str()};
}

// Non-comment CSV lines split into cells.
std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> r;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    r.push_back(cells);
  }
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("nhminor_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, ParseComplex) {
  EXPECT_EQ(cli::parse_complex("0.5"), cplx(0.5, 0.0));
  EXPECT_EQ(cli::parse_complex("0.5-0.25i"), cplx(0.5, -0.25));
  EXPECT_EQ(cli::parse_complex("-2i"), cplx(0.0, -2.0));
  EXPECT_EQ(cli::parse_complex("i"), cplx(0.0, 1.0));
  EXPECT_EQ(cli::parse_complex("1e-3+2e-1i"), cplx(1e-3, 0.2));
  EXPECT_THROW(cli::parse_complex("abc"), std::invalid_argument);
  EXPECT_THROW(cli::parse_complex(""), std::invalid_argument);
}

TEST(Cli, BumpSpec) {
  const auto b = cli::BumpSpec::parse("0.1+0.2i@0.3*2");
  EXPECT_EQ(b.center, cplx(0.1, 0.2));
  EXPECT_EQ(b.radius, 0.3);
  EXPECT_EQ(b.amplitude, cplx(2.0));
  EXPECT_EQ(cli::BumpSpec::parse(b.str()).center, b.center);
  EXPECT_THROW(cli::BumpSpec::parse("0.1"), std::invalid_argument);
  EXPECT_THROW(cli::BumpSpec::parse("0.1@-1"), std::invalid_argument);
}

TEST(Cli, ShortestFormat) {
  EXPECT_EQ(cli::fmt(0.1), "0.1");
  EXPECT_EQ(std::stod(cli::fmt(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Cli, MesoLevel) {
  const cli::MesoSpec m{0.75, 0.0, 0.2};
  EXPECT_EQ(cli::meso_level(m, 512, 0.0), 384);
  EXPECT_EQ(cli::meso_level(m, 512, 1.0), static_cast<int>(std::lround((0.75 + std::pow(512.0, -0.4)) * 512)));
}

TEST(Cli, MdeExample) {
  const auto r = run({"mde", "--x", "1.0", "--z", "0", "--eta", "1.0"});
  ASSERT_EQ(r.code, 0) << r.log;
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0][4], "m_re");
  EXPECT_NEAR(std::stod(t[1][4]), 0.0, 1e-15);
  EXPECT_NEAR(std::stod(t[1][5]), 0.6180339887498949, 1e-14);
  EXPECT_EQ(t[1].back(), "ok");
}

TEST(Cli, MdeGrid) {
  const auto r = run({"mde", "--x", "0.5,1", "--z", "0,0.3+0.1i", "--eta", "0.1,1,10"});
  ASSERT_EQ(r.code, 0) << r.log;
  EXPECT_EQ(rows(r.out).size(), 1u + 2 * 2 * 3);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"mde", "--x", "1"}).code, cli::exit_config);
  EXPECT_EQ(run({"mde", "--x", "2", "--z", "0", "--eta", "1"}).code, cli::exit_config);
  EXPECT_EQ(run({"nonsense"}).code, cli::exit_config);
  EXPECT_EQ(run({"mde", "--bogus", "1"}).code, cli::exit_config);
  EXPECT_EQ(run({"--help"}).code, cli::exit_ok);
  EXPECT_EQ(run({"simulate", "--n", "16", "--replicas", "256", "--stat", "8:0@0.5"}).code,
            cli::exit_config);
  EXPECT_EQ(run({"simulate", "--n", "16", "--replicas", "10", "--seed", "1", "--stat", "8:0@0.5"}).code,
            cli::exit_config);
  EXPECT_EQ(run({"simulate", "--n", "16", "--replicas", "256", "--seed", "1", "--stat", "20:0@0.5"}).code,
            cli::exit_config);
  EXPECT_EQ(run({"simulate", "--n", "16", "--law", "rademacher", "--beta", "2", "--replicas", "256",
                 "--seed", "1", "--stat", "8:0@0.5"})
                .code,
            cli::exit_config);
  EXPECT_EQ(run({"locallaw", "--seed", "1", "--z1", "0.1", "--z2", "0.1,0.2"}).code, cli::exit_config);
  EXPECT_EQ(run({"locallaw", "--z1", "0.1", "--z2", "0.2"}).code, cli::exit_config);
  EXPECT_EQ(run({"locallaw", "--seed", "1", "--n", "16", "--eta1", "0.01"}).code, cli::exit_config);
  EXPECT_EQ(run({"girko-check", "--samples", "1"}).code, cli::exit_config);
}

TEST(Cli, KernelCommand) {
  const auto r = run({"kernel", "--x1", "0.5", "--z1", "0", "--x2", "1", "--z2", "0", "--integrate"});
  ASSERT_EQ(r.code, 0) << r.log;
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 2u);
  std::size_t theta = 0;
  for (std::size_t c = 0; c < t[0].size(); ++c)
    if (t[0][c] == "Theta") theta = c;
  ASSERT_GT(theta, 0u);
  EXPECT_NEAR(std::stod(t[1][theta]), 0.5 * std::log(2.0), 1e-15);
  const std::string key = "int int V12 = ";
  const auto at = r.log.find(key);
  ASSERT_NE(at, std::string::npos) << r.log;
  EXPECT_NEAR(std::stod(r.log.substr(at + key.size())), -0.5 * std::log(2.0), 1e-4);
}

TEST(Cli, CovarianceFixtureReproduces) {
  const fs::path dir = NHMINOR_FIXTURES;
  const auto r = run({"cov-theory", "--config", (dir / "cov_standard.toml").string()});
  ASSERT_EQ(r.code, 0) << r.log;
  const auto got = rows(r.out), want = rows(slurp(dir / "cov_standard_expected.csv"));
  ASSERT_EQ(got.size(), want.size());
  ASSERT_EQ(got[0], want[0]);
  for (std::size_t i = 1; i < got.size(); ++i) {
    ASSERT_EQ(got[i].size(), want[i].size());
    for (std::size_t c = 0; c < got[i].size(); ++c) {
      char* end = nullptr;
      const double w = std::strtod(want[i][c].c_str(), &end);
      if (end != want[i][c].c_str() && *end == '\0')
        EXPECT_NEAR(std::stod(got[i][c]), w, 1e-9 * (1.0 + std::abs(w))) << got[0][c] << " row " << i;
      else
        EXPECT_EQ(got[i][c], want[i][c]) << got[0][c] << " row " << i;
    }
  }
}

TEST(Cli, CsvCarriesConfig) {
  const auto r = run({"mde", "--x", "0.5", "--z", "0.1", "--eta", "0.2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# config: [mde]", 0), 0u);
}

TEST(Cli, OutFileAndSummary) {
  const auto p = temp_file("mde.csv");
  const auto r = run({"mde", "--x", "0.5", "--z", "0.1", "--eta", "0.2", "--out", p.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(rows(slurp(p)).size(), 2u);
  EXPECT_EQ(r.out.find("m_re"), std::string::npos);
  fs::remove(p);
}

TEST(Cli, SimulateReplicaRoundTrip) {
  const auto reps = temp_file("replicas.csv");
  const std::vector<std::string> base{"simulate", "--n", "24", "--replicas", "256", "--seed", "7",
                                      "--stat", "12:0.1@0.4", "--stat", "24:0.2i@0.5", "--rel-tol", "0.5"};
  auto first = base;
  first.insert(first.end(), {"--replicas-out", reps.string()});
  const auto a = run(first);
  ASSERT_NE(a.code, cli::exit_config) << a.log;
  ASSERT_TRUE(fs::exists(reps));
  const auto replica_rows = rows(slurp(reps));
  EXPECT_EQ(replica_rows.size(), 1u + 2 * 256);

  auto second = base;
  second.insert(second.end(), {"--from-replicas", reps.string()});
  const auto b = run(second);
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(rows(a.out), rows(b.out));

  auto third = base;
  third.insert(third.end(), {"--workers", "3"});
  EXPECT_EQ(rows(run(third).out), rows(a.out));
  fs::remove(reps);
}

TEST(Cli, SimulateConfigFile) {
  const fs::path dir = NHMINOR_FIXTURES;
  const auto r = run({"simulate", "--config", (dir / "simulate_small.toml").string()});
  ASSERT_TRUE(r.code == cli::exit_ok || r.code == cli::exit_failed) << r.log;
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 1u + 3);  // pairs (1,1), (1,2), (2,2)
  EXPECT_EQ(t[0].front(), "kind");
  EXPECT_EQ(t[0].back(), "verdict");
}

TEST(Cli, ToolBinaryRuns) {
  const std::string cmd = std::string(NHMINOR_TOOL) + " mde --x 1 --z 0 --eta 1 > /dev/null 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  const std::string bad = std::string(NHMINOR_TOOL) + " mde > /dev/null 2>&1";
  const int status = std::system(bad.c_str());
  EXPECT_EQ(WEXITSTATUS(status), cli::exit_config);
}
