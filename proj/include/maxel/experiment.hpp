#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxel/descent.hpp"
#include "maxel/fixtures.hpp"
#include "maxel/properties.hpp"
#include "maxel/trace_io.hpp"
#include "maxel/vip.hpp"

namespace maxel {

struct Verdict {
  std::string check;
  bool expected = true;
  bool outcome = true;
  bool passed = true;
  std::string detail;
  std::vector<Point> witness;
};

struct RunReport {
  std::string command;
  std::string fixture;
  std::vector<Verdict> verdicts;
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
  double wall_time = 0.0;

  bool passed() const {
    if (verdicts.empty()) return false;
    for (const auto& v : verdicts)
      if (!v.passed) return false;
    return true;
  }
  int exit_code() const { return passed() ? 0 : 1; }

  const Verdict* find(const std::string& check) const {
    for (const auto& v : verdicts)
      if (v.check == check) return &v;
    return nullptr;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["command"] = command;
    j["fixture"] = fixture;
    auto& vs = j["verdicts"] = nlohmann::json::array();
    for (const auto& v : verdicts) {
      auto w = nlohmann::json::array();
      for (const auto& p : v.witness) w.push_back(detail::point_json(p));
      vs.push_back({{"check", v.check},
                    {"expected", v.expected},
                    {"outcome", v.outcome},
                    {"passed", v.passed},
                    {"detail", v.detail},
                    {"witness", w}});
    }
    j["artifacts"] = artifacts;
    j["warnings"] = warnings;
    j["wall_time_s"] = wall_time;
    return j;
  }
};

struct DescentRequest {
  Point x0;
  double theta0 = 1.0;
  std::optional<std::vector<double>> schedule_list;  // explicit steps instead of harmonic
  std::size_t max_iters = 10000;
  double eps = 0.0;
  std::optional<std::filesystem::path> trace_path;
  double dist_tol = 0.01;
};

struct VipRequest {
  VipKind kind = VipKind::stampacchia;
  std::optional<HullMode> mode;
};

struct ExperimentDescriptor {
  std::string command;
  std::string fixture;
  std::vector<std::string> suite;  // empty: the fixture's default suite
  std::optional<std::string> grid;
  double tol = kDefaultConeTol;
  std::uint64_t seed = 42;
  std::optional<DescentRequest> descent;
  std::optional<VipRequest> vip;
};

inline std::vector<std::string> known_checks() {
  return {"reflexive", "complete", "transitive", "2fip", "fip", "convexU", "convexUs",
          "maximal", "maxima-subset", "cone-selftest", "nstar-gap", "svip-all", "svip-inclusion",
          "mvip-empty", "uniqueness", "zero-maximality", "nf-boundary", "gap-audit"};
}

namespace detail {

inline std::string describe_points(const std::vector<Point>& pts, std::size_t limit = 8) {
  std::string s = "{";
  for (std::size_t i = 0; i < pts.size() && i < limit; ++i) {
    if (i) s += ", ";
    s += pts[i].to_string();
  }
  if (pts.size() > limit) s += ", ... " + std::to_string(pts.size()) + " total";
  return s + "}";
}

struct CheckOutcome {
  bool outcome = true;
  std::string detail;
  std::vector<Point> witness;
};

struct RunContext {
  const Fixture& fixture;
  GroundSet ground;
  std::vector<Point> competitors;
  double tol;
  std::uint64_t seed;
  std::vector<std::string>& warnings;
};

inline CheckOutcome from_report(const PropertyReport& r) {
  CheckOutcome c{r.holds, r.skipped ? r.note : (r.holds ? "holds" : "fails"), r.witness};
  if (!r.holds && !r.witness.empty()) c.detail += " witness " + describe_points(r.witness);
  return c;
}

inline void require_cones(const Fixture& f, const std::string& check) {
  if (!f.cones) throw ConfigError("check '" + check + "' needs closed-form cones; fixture " + f.name + " has none");
}

inline void require_gap(const Fixture& f, const std::string& check) {
  if (!f.gap) throw ConfigError("check '" + check + "' needs a gap function; fixture " + f.name + " has none");
}

inline GapFunction audited_gap(const RunContext& ctx, bool record) {
  const Fixture& f = ctx.fixture;
  if (!f.audit_sampler) return *f.gap;
  auto audit = audit_gap(*f.gap, f.relation, *f.audit_sampler, 1000, ctx.seed);
  if (record)
    for (auto& w : audit.warnings) ctx.warnings.push_back("warning: " + w);
  return with_flags(*f.gap, audit.flags);
}

inline CheckOutcome run_check(const std::string& name, RunContext& ctx) {
  const Fixture& f = ctx.fixture;
  const Relation& rel = f.relation;
  const GroundSet& X = ctx.ground;
  if (name == "reflexive") return from_report(check_property(rel, X, Property::reflexive));
  if (name == "complete") return from_report(check_property(rel, X, Property::complete));
  if (name == "transitive") return from_report(check_property(rel, X, Property::transitive));
  if (name == "2fip") return from_report(check_property(rel, X, Property::m_fip, 2));
  if (name == "fip") return from_report(check_property(rel, X, Property::fip));
  if (name == "convexU") return from_report(check_property(rel, X, Property::convex_upper));
  if (name == "convexUs") return from_report(check_property(rel, X, Property::convex_strict_upper));
  if (name == "maximal") {
    const auto me = maximal_elements(rel, X, ctx.competitors);
    CheckOutcome c;
    c.outcome = f.expected_maximal ? same_point_set(me, *f.expected_maximal) : !me.empty();
    c.detail = "ME = " + describe_points(me);
    if (f.expected_maximal) c.detail += ", expected " + describe_points(*f.expected_maximal);
    c.witness = me;
    return c;
  }
  if (name == "maxima-subset") {
    const auto me = maximal_elements(rel, X);
    const auto m = maxima(rel, X);
    CheckOutcome c;
    c.outcome = is_subset(m, me) && (!f.complete || same_point_set(m, me));
    c.detail = "M = " + describe_points(m) + ", ME = " + describe_points(me);
    return c;
  }
  if (name == "cone-selftest") {
    require_cones(f, name);
    const auto st = cone_self_test(f, ctx.seed, 100, 0.1, ctx.tol);
    CheckOutcome c{st.mismatches == 0,
                   std::to_string(st.probes) + " probes, " + std::to_string(st.mismatches) + " mismatches, " +
                       std::to_string(st.ambiguous) + " ambiguous skipped",
                   st.first_mismatch};
    return c;
  }
  if (name == "nstar-gap") {
    require_cones(f, name);
    std::size_t checked = 0;
    for (const auto& x : sample_base_points(f)) {
      const auto sample = sample_strict_contour(rel, x, default_sample_box(x, f.reference));
      auto probes = unit_sphere_net(X.dim(), SphereNet{72});
      const Cone cone = (*f.cones)(x);
      for (const auto& g : cone.unit_generators()) probes.push_back(g);
      for (const auto& q : probes) {
        if (!normal_membership(sample, q, ctx.tol)) continue;
        ++checked;
        if (!strict_normal_membership(sample, q, 1e-7))
          return {false, "N(x) != N*(x) ∪ {0}: " + q.to_string() + " in N but not N* at " + x.to_string(), {x, q}};
      }
    }
    return {true, std::to_string(checked) + " nonzero elements of N also in N*", {}};
  }
  if (name == "svip-all" || name == "svip-inclusion") {
    require_cones(f, name);
    BodyOracle bodies = [&f](const Point& x) { return f.body(x); };
    if (name == "svip-all") {
      const auto sol = svip_solutions(bodies, X, ctx.tol);
      return {sol.size() == X.size(),
              "SVIP covers " + std::to_string(sol.size()) + " of " + std::to_string(X.size()) + " ground points",
              {}};
    }
    auto c = from_report(svip_inclusion_check(rel, X, bodies, ctx.tol));
    return c;
  }
  if (name == "mvip-empty") {
    require_cones(f, name);
    const auto sol = mvip_solutions(*f.cones, X, ctx.tol);
    return {sol.empty(), "MVIP = " + describe_points(sol), sol};
  }
  if (name == "uniqueness") {
    require_cones(f, name);
    const auto u = uniqueness_check(rel, *f.cones, X, ctx.tol, ctx.competitors);
    return {u.equivalence_holds,
            "ME = " + describe_points(u.maximal) + ", MVIP = " + describe_points(u.minty) +
                (u.equivalence_holds ? ", singleton <=> ME=MVIP" : ", singleton <=> ME=MVIP fails"),
            {}};
  }
  if (name == "zero-maximality") {
    require_gap(f, name);
    return from_report(zero_maximality_check(audited_gap(ctx, false), rel, X, ctx.tol));
  }
  if (name == "gap-audit") {
    require_gap(f, name);
    if (!f.audit_sampler) throw ConfigError("fixture " + f.name + " has no audit sampler");
    const auto g = audited_gap(ctx, true);
    const auto& d = f.gap->flags;
    const auto& a = g.flags;
    const bool intact = d.sign_strict_upper == a.sign_strict_upper && d.sign_strict_lower == a.sign_strict_lower &&
                        d.lipschitz == a.lipschitz && d.order_compatible == a.order_compatible;
    return {intact, intact ? "declared flags confirmed on 1000 pairs" : "flags downgraded by audit", {}};
  }
  if (name == "nf-boundary") {
    require_gap(f, name);
    if (!f.nf_upper_bound) throw ConfigError("fixture " + f.name + " has no closed-form N_f");
    for (int i = 0; i <= 20; ++i) {
      if (i == 10) continue;
      const Point x{-5.0 + 0.5 * i};
      const auto sample = sample_strict_contour(rel, x, default_sample_box(x, f.reference));
      const double b = f.nf_upper_bound(x[0]);
      if (!nf_membership(*f.gap, sample, Point{b}, ctx.tol))
        return {false, "boundary " + std::to_string(b) + " rejected at " + x.to_string(), {x}};
      if (nf_membership(*f.gap, sample, Point{b + 0.1}, ctx.tol))
        return {false, "boundary+0.1 accepted at " + x.to_string(), {x}};
    }
    return {true, "boundary accepted, boundary+0.1 rejected at 20 base points", {}};
  }
  throw ConfigError("unknown check '" + name + "'");
}

}  // namespace detail

/// Parses a whitespace-separated list of step sizes.
inline std::vector<double> read_schedule_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read schedule file " + path.string());
  std::vector<double> v;
  double t;
  while (is >> t) v.push_back(t);
  if (!is.eof()) throw ConfigError("bad number in schedule file " + path.string());
  return v;
}

/// Runs the requested checks (or descent / VIP sweep) on a fixture in a
/// deterministic order.
inline RunReport run_experiment(const ExperimentDescriptor& d) {
  const auto start = std::chrono::steady_clock::now();
  if (!(d.tol >= 0.0)) throw ConfigError("tolerance must be nonnegative");
  const Fixture& f = get_fixture(d.fixture);

  RunReport report;
  report.command = d.command;
  report.fixture = f.name;

  GroundSet ground = f.ground;
  std::vector<Point> competitors = f.competitors();
  if (d.grid) {
    try {
      ground = GroundSet::parse(*d.grid);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
    if (ground.dim() != f.relation.dim())
      throw ConfigError("grid has dimension " + std::to_string(ground.dim()) + ", fixture needs " +
                        std::to_string(f.relation.dim()));
    competitors = ground.points();
    if (f.ambient)
      for (const auto& p : f.ambient->points())
        if (!contains_point(competitors, p)) competitors.push_back(p);
  }
  detail::RunContext ctx{f, ground, competitors, d.tol, d.seed, report.warnings};

  auto add = [&](const std::string& check, const detail::CheckOutcome& c, bool expected) {
    report.verdicts.push_back({check, expected, c.outcome, c.outcome == expected, c.detail, c.witness});
  };

  if (d.descent) {
    const auto& req = *d.descent;
    if (!f.can_descend())
      throw ConfigError("fixture " + f.name + " cannot run descent: needs a gap function with Lipschitz bound "
                        "and a strict-normal oracle");
    if (req.x0.dim() != f.relation.dim()) throw ConfigError("x0 dimension does not match fixture");
    const GapFunction& gap = *f.gap;
    const double L = *gap.lipschitz;
    SubgradientOracle oracle = [&](const Point& x) {
      if (auto u = f.strict_normal(x)) return nf_subgradient(gap, x, *u);
      return Point::zero(x.dim());
    };
    const StepSchedule schedule =
        req.schedule_list ? StepSchedule::list(*req.schedule_list) : StepSchedule::harmonic(req.theta0);
    DescentTrace trace;
    try {
      trace = run_descent(oracle, req.x0, schedule, DescentConfig{req.max_iters, req.eps, L}, f.reference, &gap);
    } catch (const ScheduleError& e) {
      throw ConfigError(e.what());
    }
    if (req.trace_path) {
      emit_trace(trace, trace_format_for(*req.trace_path), *req.trace_path);
      report.artifacts.push_back(req.trace_path->string());
    }
    add("descent",
        {true,
         to_string(trace.termination) + " after " + std::to_string(trace.steps()) + " steps at " +
             trace.final_point().to_string(),
         {trace.final_point()}},
        true);
    const double recon = reconstruction_residual(trace);
    add("update-rule", {recon <= 1e-12, "max relative reconstruction residual " + detail::fmt_double(recon), {}}, true);
    if (trace.termination == Termination::zero_subgradient) {
      const Point& x = trace.final_point();
      const auto s = sample_strict_contour(f.relation, x, default_sample_box(x, f.reference));
      add("stop-is-maximal", {s.empty_contour, "sampled strict contour at stop has " +
                                                   std::to_string(s.points.size()) + " points", {x}},
          true);
    }
    if (f.reference) {
      const double dist = distance(trace.final_point(), *f.reference);
      add("final-distance", {dist <= req.dist_tol, "||x_K - ref|| = " + detail::fmt_double(dist), {}}, true);
      add("quasi-fejer", {quasi_fejer_check(trace, *f.reference, L), "budget theta_k^2 L^2", {}}, true);
      const auto g = gap_convergence_stat(trace, gap, *f.reference);
      add("gap-vanishing", {g.converged, "max |f(x_k, ref)| over last " + std::to_string(g.window) +
                                             " iterates = " + detail::fmt_double(g.value), {}},
          true);
    }
  } else if (d.vip) {
    detail::require_cones(f, "vip");
    const auto mode = d.vip->mode.value_or(f.hull_mode);
    if (d.vip->kind == VipKind::stampacchia) {
      BodyOracle bodies = [&f, mode](const Point& x) { return f.body(x, mode); };
      const auto sol = svip_solutions(bodies, ground, d.tol);
      const auto me = maximal_elements(f.relation, ground);
      add("svip-solutions", {true, "SVIP = " + detail::describe_points(sol), sol}, true);
      add("svip-inclusion", {is_subset(sol, me), "ME = " + detail::describe_points(me), {}},
          f.expected("svip-inclusion"));
    } else {
      const auto sol = mvip_solutions(*f.cones, ground, d.tol);
      add("mvip-solutions", {true, "MVIP = " + detail::describe_points(sol), sol}, true);
      const auto u = uniqueness_check(f.relation, *f.cones, ground, d.tol, competitors);
      add("uniqueness", {u.equivalence_holds, "ME = " + detail::describe_points(u.maximal), {}},
          f.expected("uniqueness"));
    }
  } else {
    const auto& suite = d.suite.empty() ? f.default_suite : d.suite;
    const auto known = known_checks();
    for (const auto& check : suite)
      if (std::find(known.begin(), known.end(), check) == known.end())
        throw ConfigError("unknown check '" + check + "'");
    for (const auto& check : suite) add(check, detail::run_check(check, ctx), f.expected(check));
  }

  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace maxel
