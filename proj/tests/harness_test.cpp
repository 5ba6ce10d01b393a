#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "maxel/experiment.hpp"

using namespace maxel;

namespace {

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("maxel_harness_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct CliResult {
  int exit = -1;
  std::string out;
};

CliResult cli(const std::string& args) {
  const auto out = scratch("cli_stdout.txt");
  const std::string cmd = std::string("\"") + MAXEL_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  std::filesystem::remove(out);
  return r;
}

ExperimentDescriptor check_of(const std::string& fixture, std::vector<std::string> suite = {}) {
  ExperimentDescriptor d;
  d.command = "check";
  d.fixture = fixture;
  d.suite = std::move(suite);
  return d;
}

}  // namespace

TEST(Registry, FavoredPointCones) {
  const auto& f = get_fixture("exN-favored-one");
  ASSERT_TRUE(f.cones.has_value());
  EXPECT_EQ((*f.cones)(Point{1.0}).tag(), Cone::Tag::zero);
  for (double x : {0.0, 0.5, 0.99, 1.01, 2.0}) EXPECT_EQ((*f.cones)(Point{x}).tag(), Cone::Tag::full) << x;
  EXPECT_TRUE(f.lsc);
}

TEST(Registry, SegmentFixtureHalfPlaneCones) {
  const auto& f = get_fixture("rmk311-segment-K");
  EXPECT_EQ(f.hull_mode, HullMode::G);
  EXPECT_EQ(f.ground.size(), 101u);
  for (const auto& p : f.ground.points()) EXPECT_EQ(p[1], 0.0);
  const Cone c = (*f.cones)(Point{0.5, 0.0});
  // {x* <= 0}: the closed left half-plane.
  EXPECT_TRUE(c.contains(Point{-1.0, 3.0}));
  EXPECT_TRUE(c.contains(Point{0.0, -2.0}));
  EXPECT_FALSE(c.contains(Point{0.1, 0.0}));
}

TEST(Registry, UnknownNameListsFixtures) {
  try {
    get_fixture("nosuch");
    FAIL() << "expected UnknownFixture";
  } catch (const UnknownFixture& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("nosuch"), std::string::npos);
    for (const auto& f : registry()) EXPECT_NE(msg.find(f.name), std::string::npos) << f.name;
  }
}

TEST(Registry, NamesUniqueAndSelfTestClean) {
  std::set<std::string> names;
  for (const auto& f : registry()) {
    EXPECT_TRUE(names.insert(f.name).second) << f.name;
    EXPECT_FALSE(f.notes.empty()) << f.name;
    EXPECT_FALSE(f.default_suite.empty()) << f.name;
    EXPECT_EQ(cone_self_test(f).mismatches, 0u) << f.name;
  }
  EXPECT_EQ(names.size(), 14u);
}

TEST(RunExperiment, NoncompleteZeroMaximalAndMintyEmpty) {
  const auto report = run_experiment(check_of("ex315-noncomplete", {"maximal", "mvip-empty"}));
  ASSERT_EQ(report.verdicts.size(), 2u);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.exit_code(), 0);
  const auto* me = report.find("maximal");
  ASSERT_NE(me, nullptr);
  ASSERT_EQ(me->witness.size(), 1u);
  EXPECT_EQ(me->witness[0], Point{0.0});
  EXPECT_TRUE(report.find("mvip-empty")->outcome);
}

TEST(RunExperiment, RadialDescentPasses) {
  ExperimentDescriptor d;
  d.command = "descend";
  d.fixture = "utility-radial-a(1,2)";
  d.descent = DescentRequest{Point{0.0, 0.0}};
  const auto report = run_experiment(d);
  EXPECT_TRUE(report.passed());
  for (const char* v : {"descent", "update-rule", "final-distance", "quasi-fejer", "gap-vanishing"})
    EXPECT_NE(report.find(v), nullptr) << v;
  EXPECT_TRUE(report.find("final-distance")->passed);
}

TEST(RunExperiment, CapabilityAndConfigErrors) {
  ExperimentDescriptor d;
  d.fixture = "exN-favored-one";
  d.descent = DescentRequest{Point{0.5}};
  EXPECT_THROW(run_experiment(d), ConfigError);

  auto neg = check_of("utility-peak-0.7");
  neg.tol = -1.0;
  EXPECT_THROW(run_experiment(neg), ConfigError);

  EXPECT_THROW(run_experiment(check_of("utility-peak-0.7", {"maximal", "no-such-check"})), ConfigError);
  EXPECT_THROW(run_experiment(check_of("nosuch")), ConfigError);

  auto dim = check_of("utility-peak-0.7", {"maximal"});
  dim.grid = "0:1:0.1,0:1:0.1";
  EXPECT_THROW(run_experiment(dim), ConfigError);
  dim.grid = "0:1";
  EXPECT_THROW(run_experiment(dim), ConfigError);

  ExperimentDescriptor sched;
  sched.fixture = "utility-peak-0.7";
  sched.descent = DescentRequest{Point{0.0}};
  sched.descent->schedule_list = std::vector<double>{0.5, 0.25};
  EXPECT_THROW(run_experiment(sched), ConfigError);
}

TEST(RunExperiment, GridOverrideKeepsAmbientCompetitors) {
  auto d = check_of("ex315-noncomplete", {"maximal"});
  d.grid = "-1:1:0.1";
  const auto report = run_experiment(d);
  EXPECT_TRUE(report.passed());
  ASSERT_EQ(report.find("maximal")->witness.size(), 1u);
}

TEST(RunExperiment, DefaultSuitesPassWithPolarity) {
  for (const auto& f : registry()) {
    const auto report = run_experiment(check_of(f.name));
    EXPECT_EQ(report.verdicts.size(), f.default_suite.size()) << f.name;
    EXPECT_TRUE(report.passed()) << f.name;
    for (const auto& v : report.verdicts) {
      EXPECT_EQ(v.expected, f.expected(v.check)) << f.name << " " << v.check;
      EXPECT_TRUE(v.passed) << f.name << " " << v.check << ": " << v.detail;
    }
  }
}

TEST(RunExperiment, FailingCheckGivesExitOne) {
  const auto report = run_experiment(check_of("exN-favored-one", {"complete"}));
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(report.exit_code(), 1);
  EXPECT_FALSE(report.verdicts[0].witness.empty());
}

TEST(RunExperiment, JsonReportSchema) {
  const auto report = run_experiment(check_of("utility-peak-0.7", {"maximal", "complete"}));
  const auto j = report.to_json();
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("fixture"), "utility-peak-0.7");
  ASSERT_EQ(j.at("verdicts").size(), 2u);
  EXPECT_EQ(j.at("verdicts")[0].at("check"), "maximal");
  EXPECT_TRUE(j.at("verdicts")[0].at("passed").get<bool>());
  EXPECT_TRUE(j.contains("wall_time_s"));
  EXPECT_TRUE(j.at("artifacts").is_array());
}

TEST(RunExperiment, SameSeedSameReport) {
  auto d = check_of("utility-radial-a(1,2)", {"gap-audit", "cone-selftest"});
  d.seed = 7;
  auto a = run_experiment(d).to_json();
  auto b = run_experiment(d).to_json();
  a.erase("wall_time_s");
  b.erase("wall_time_s");
  EXPECT_EQ(a, b);
}

TEST(RunExperiment, VipSweeps) {
  ExperimentDescriptor d;
  d.fixture = "rmk311-segment-K";
  d.vip = VipRequest{VipKind::stampacchia, HullMode::G};
  const auto svip = run_experiment(d);
  EXPECT_TRUE(svip.passed());
  EXPECT_EQ(svip.find("svip-solutions")->witness.size(), 101u);
  EXPECT_FALSE(svip.find("svip-inclusion")->outcome);

  d.fixture = "ex315-noncomplete";
  d.vip = VipRequest{VipKind::minty, std::nullopt};
  const auto mvip = run_experiment(d);
  EXPECT_TRUE(mvip.passed());
  EXPECT_TRUE(mvip.find("mvip-solutions")->witness.empty());
}

TEST(Cli, FixturesList) {
  const auto r = cli("fixtures list");
  EXPECT_EQ(r.exit, 0);
  for (const auto& f : registry()) EXPECT_NE(r.out.find(f.name), std::string::npos) << f.name;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("check --fixture ex315-noncomplete --suite maximal,mvip-empty").exit, 0);
  EXPECT_EQ(cli("check --fixture exN-favored-one --suite complete").exit, 1);
  const auto unknown = cli("check --fixture nosuch");
  EXPECT_EQ(unknown.exit, 2);
  EXPECT_NE(unknown.out.find("two-plateau"), std::string::npos);
  EXPECT_EQ(cli("check --fixture utility-peak-0.7 --tol -1").exit, 2);
  EXPECT_EQ(cli("check --fixture utility-peak-0.7 --suite bogus").exit, 2);
  EXPECT_EQ(cli("descend --fixture exN-favored-one --x0 0.5").exit, 2);
  EXPECT_EQ(cli("descend --fixture utility-peak-0.7 --x0 0 --schedule constant").exit, 2);
  EXPECT_EQ(cli("check").exit, 2);
  EXPECT_EQ(cli("").exit, 2);
}

TEST(Cli, DescendWritesTrace) {
  const auto csv = scratch("trace.csv");
  const auto json = scratch("report.json");
  std::filesystem::remove(csv);
  const auto r = cli("descend --fixture 'utility-radial-a(1,2)' --x0 0,0 --max-iters 10000 --trace \"" +
                     csv.string() + "\" --json \"" + json.string() + "\"");
  EXPECT_EQ(r.exit, 0) << r.out;
  EXPECT_NE(r.out.find("PASS final-distance"), std::string::npos);
  ASSERT_TRUE(std::filesystem::exists(csv));
  const auto text = slurp(csv);
  EXPECT_EQ(text.rfind("k,x,xstar,theta,dist_to_ref,gap_to_ref,fejer_residual\n", 0), 0u);
  const auto report = nlohmann::json::parse(slurp(json));
  EXPECT_EQ(report.at("schema"), 1);
  EXPECT_EQ(report.at("artifacts")[0], csv.string());
  std::filesystem::remove(csv);
  std::filesystem::remove(json);
}

TEST(Cli, ListScheduleFromFile) {
  const auto steps = scratch("steps.txt");
  {
    std::ofstream os(steps);
    // The first step lands on the peak at 0.7 from 0.
    os << 0.7 << "\n";
    for (int k = 2; k <= 20; ++k) os << 0.5 / k << "\n";
  }
  const auto ok = cli("descend --fixture utility-peak-0.7 --x0 0 --max-iters 20 --schedule list:" + steps.string());
  EXPECT_EQ(ok.exit, 0) << ok.out;
  EXPECT_NE(ok.out.find("zeroSubgradient after 1 steps"), std::string::npos) << ok.out;
  EXPECT_EQ(cli("descend --fixture utility-peak-0.7 --x0 0 --max-iters 30 --schedule list:" + steps.string()).exit, 2);
  EXPECT_EQ(cli("descend --fixture utility-peak-0.7 --x0 0 --schedule list:/nonexistent/steps.txt").exit, 2);
  std::filesystem::remove(steps);
}

TEST(Cli, VipAndGridOverride) {
  EXPECT_EQ(cli("vip --fixture rmk311-segment-K --kind svip --mode G").exit, 0);
  EXPECT_EQ(cli("vip --fixture ex315-noncomplete --kind mvip").exit, 0);
  EXPECT_EQ(cli("vip --fixture ex315-noncomplete --kind other").exit, 2);
  EXPECT_EQ(cli("check --fixture rmk35-line --grid=-1:1:0.5,0:0:1 --suite maximal").exit, 0);
  EXPECT_EQ(cli("check --fixture rmk35-line --grid 0:1:0.5 --suite maximal").exit, 2);
}

TEST(Cli, ConfigFile) {
  const auto cfg = scratch("run.cfg");
  {
    std::ofstream os(cfg);
    os << "[check]\nfixture=utility-peak-0.7\nsuite=maximal,complete\nseed=3\n";
  }
  const auto r = cli("--config \"" + cfg.string() + "\" check");
  EXPECT_EQ(r.exit, 0) << r.out;
  EXPECT_NE(r.out.find("PASS complete"), std::string::npos);
  std::filesystem::remove(cfg);
}
