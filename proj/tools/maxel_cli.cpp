#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "maxel/maxel.hpp"

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

maxel::Point parse_point(const std::string& s) {
  std::vector<double> c;
  for (const auto& tok : split(s, ',')) {
    try {
      std::size_t used = 0;
      c.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw maxel::ConfigError("bad coordinate '" + tok + "' in --x0");
    }
  }
  if (c.empty()) throw maxel::ConfigError("--x0 is empty");
  try {
    return maxel::Point(std::move(c));
  } catch (const maxel::Error& e) {
    throw maxel::ConfigError(e.what());
  }
}

void print_report(const maxel::RunReport& r) {
  for (const auto& w : r.warnings) std::cerr << w << "\n";
  for (const auto& v : r.verdicts) {
    std::cout << (v.passed ? "PASS " : "FAIL ") << v.check;
    if (!v.expected) std::cout << " (counterexample expected)";
    std::cout << ": " << v.detail << "\n";
  }
  for (const auto& a : r.artifacts) std::cout << "wrote " << a << "\n";
  std::cout << (r.passed() ? "all checks passed" : "some checks failed") << " in " << r.wall_time << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal elements of preference relations: checks, VIP sweeps and descent runs"};
  app.set_config("--config", "", "key=value config file");
  app.require_subcommand(1);

  auto* fixtures = app.add_subcommand("fixtures", "Fixture registry");
  fixtures->add_subcommand("list", "Print registered fixtures with notes");
  fixtures->require_subcommand(1);

  maxel::ExperimentDescriptor desc;
  // List-valued options take a ',' delimiter so config files may write
  // either "suite=a,b" or "suite=[a,b]".
  std::vector<std::string> suite, grid_clauses;
  std::string json_path;

  auto* check = app.add_subcommand("check", "Run a check suite on a fixture");
  check->add_option("--fixture", desc.fixture, "Fixture name")->required();
  check->add_option("--suite", suite, "Comma-separated check names")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  check->add_option("--grid", grid_clauses, "Ground grid lo:hi:step[,lo:hi:step...]")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  check->add_option("--tol", desc.tol, "Membership tolerance");
  check->add_option("--seed", desc.seed, "Random seed");
  check->add_option("--json", json_path, "Write the report as JSON");

  std::vector<std::string> x0;
  std::string schedule = "harmonic", trace_path;
  maxel::DescentRequest dreq;
  auto* descend = app.add_subcommand("descend", "Run the subgradient descent on a fixture");
  descend->add_option("--fixture", desc.fixture, "Fixture name")->required();
  descend->add_option("--x0", x0, "Start point, comma-separated")->required()->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  descend->add_option("--theta0", dreq.theta0, "Harmonic step numerator");
  descend->add_option("--schedule", schedule, "harmonic or list:<path>");
  descend->add_option("--max-iters", dreq.max_iters, "Iteration cap");
  descend->add_option("--eps", dreq.eps, "Stop when ||x*|| falls below this");
  descend->add_option("--trace", trace_path, "Trace output (.csv or .json)");
  descend->add_option("--json", json_path, "Write the report as JSON");

  std::string kind, mode;
  auto* vip = app.add_subcommand("vip", "Enumerate Stampacchia or Minty solutions on a grid");
  vip->add_option("--fixture", desc.fixture, "Fixture name")->required();
  vip->add_option("--kind", kind, "svip or mvip")->required()->check(CLI::IsMember({"svip", "mvip"}));
  vip->add_option("--mode", mode, "T or G")->check(CLI::IsMember({"T", "G"}));
  vip->add_option("--grid", grid_clauses, "Ground grid lo:hi:step[,lo:hi:step...]")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  vip->add_option("--tol", desc.tol, "Membership tolerance");
  vip->add_option("--json", json_path, "Write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (fixtures->parsed()) {
      for (const auto& f : maxel::registry()) std::cout << f.name << "\n    " << f.notes << "\n";
      return 0;
    }
    if (!grid_clauses.empty()) desc.grid = CLI::detail::join(grid_clauses, ",");
    if (check->parsed()) {
      desc.command = "check";
      for (const auto& s : suite)
        if (!s.empty()) desc.suite.push_back(s);
    } else if (descend->parsed()) {
      desc.command = "descend";
      dreq.x0 = parse_point(CLI::detail::join(x0, ","));
      if (schedule.rfind("list:", 0) == 0)
        dreq.schedule_list = maxel::read_schedule_file(schedule.substr(5));
      else if (schedule != "harmonic")
        throw maxel::ConfigError("unknown schedule '" + schedule + "'");
      if (!trace_path.empty()) dreq.trace_path = trace_path;
      desc.descent = dreq;
    } else {
      desc.command = "vip";
      maxel::VipRequest v;
      v.kind = kind == "svip" ? maxel::VipKind::stampacchia : maxel::VipKind::minty;
      if (!mode.empty()) v.mode = mode == "T" ? maxel::HullMode::T : maxel::HullMode::G;
      desc.vip = v;
    }
    const auto report = maxel::run_experiment(desc);
    print_report(report);
    if (!json_path.empty()) maxel::write_atomic(json_path, report.to_json().dump(2) + "\n");
    return report.exit_code();
  } catch (const maxel::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
