#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "maxel/cone.hpp"
#include "maxel/ground_set.hpp"
#include "maxel/plastria.hpp"
#include "maxel/relation.hpp"
#include "maxel/vip.hpp"

namespace maxel {

class UnknownFixture : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A relation from the literature together with everything the checks need:
/// closed-form normal cones, an optional gap function, a default ground set
/// and the expected polarity of each check (counterexamples expect failure).
struct Fixture {
  std::string name;
  std::string notes;
  Relation relation;
  GroundSet ground;
  std::optional<GroundSet> ambient;  // competitors standing in for R^n
  std::optional<ConeOracle> cones;
  /// Some u* in N*(x), or nullopt when the strict contour of x is empty.
  std::function<std::optional<Point>(const Point&)> strict_normal;
  std::optional<GapFunction> gap;
  std::optional<PointSampler> audit_sampler;
  /// 1-D Plastria cones of the form ]-inf, b(x)] off the maximal set.
  std::function<double(double)> nf_upper_bound;
  std::optional<Point> reference;  // a known maximal element
  std::vector<Point> landmarks;    // base points the sampled checks always visit
  std::optional<std::vector<Point>> expected_maximal;
  bool lsc = false;
  bool complete = false;
  HullMode hull_mode = HullMode::T;
  std::vector<std::string> default_suite;
  std::map<std::string, bool> expectations;

  bool expected(const std::string& check) const {
    auto it = expectations.find(check);
    return it == expectations.end() ? true : it->second;
  }

  bool can_descend() const { return gap && gap->lipschitz && static_cast<bool>(strict_normal); }

  /// T(x) (or G(x)) built from the closed-form cone at x.
  ConvexBody body(const Point& x, std::optional<HullMode> mode = std::nullopt) const {
    const Cone c = (*cones)(x);
    return build_T(c, mode.value_or(hull_mode), c.tag() == Cone::Tag::full);
  }

  std::vector<Point> competitors() const { return ambient ? ambient->points() : ground.points(); }
};

namespace detail {

inline bool near(double a, double b) { return std::abs(a - b) <= kPointEqualityTol; }
inline double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

inline Relation axis_order_relation(std::string name) {
  // (x, y) >= (a, b) iff x >= a and y = b = 0
  return Relation::predicate(std::move(name), 2, [](const Point& p, const Point& q) {
    return p[0] >= q[0] && near(p[1], 0.0) && near(q[1], 0.0);
  });
}

inline ConeOracle axis_order_cones() {
  return [](const Point& p) {
    if (!near(p[1], 0.0)) return Cone::full(2);
    return Cone::generated({Point{-1.0, 0.0}, Point{0.0, 1.0}, Point{0.0, -1.0}});
  };
}

inline Relation noncomplete_zero_relation() {
  // (x, y) = (0, 0) or (x >= y and y != 0)
  return Relation::predicate("ex315", 1, [](const Point& p, const Point& q) {
    const double x = p[0], y = q[0];
    return (near(x, 0.0) && near(y, 0.0)) || (x >= y && !near(y, 0.0));
  });
}

inline ConeOracle noncomplete_zero_cones() {
  return [](const Point& p) { return near(p[0], 0.0) ? Cone::full(1) : Cone::generated({Point{-1.0}}); };
}

inline std::vector<Fixture> build_registry() {
  std::vector<Fixture> reg;

  {
    Fixture f{"ex22-fip-not-complete",
              "X=[0,4], x>=y iff y/2+2 <= x <= 4 and (x,y) != (7/2,2): FIP without completeness, "
              "reflexivity or transitivity",
              Relation::predicate("ex22", 1,
                                  [](const Point& p, const Point& q) {
                                    const double x = p[0], y = q[0];
                                    return y / 2.0 + 2.0 <= x && x <= 4.0 && !(near(x, 3.5) && near(y, 2.0));
                                  }),
              GroundSet::grid1d(0.0, 4.0, 0.25)};
    f.expected_maximal = std::vector<Point>{Point{4.0}};
    f.default_suite = {"reflexive", "complete", "transitive", "fip", "maximal", "maxima-subset"};
    f.expectations = {{"reflexive", false}, {"complete", false}, {"transitive", false}};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"convex-counter-U",
              "X=[0,1], x>=y iff x=0 or y=x: U(x)={0,x} not convex, U^s convex",
              Relation::predicate("convex-counter-U", 1,
                                  [](const Point& p, const Point& q) {
                                    return near(p[0], 0.0) || near(q[0], p[0]);
                                  }),
              GroundSet::grid1d(0.0, 1.0, 0.05)};
    f.default_suite = {"convexU", "convexUs"};
    f.expectations = {{"convexU", false}};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"convex-counter-Us",
              "X=[0,1], x>=y iff y=0, or x=y for y in ]0,1]\\{1/2}, or x=0 for y=1/2: convex, not convex^s",
              Relation::predicate("convex-counter-Us", 1,
                                  [](const Point& p, const Point& q) {
                                    const double x = p[0], y = q[0];
                                    if (near(y, 0.0)) return true;
                                    if (near(y, 0.5)) return near(x, 0.0);
                                    return near(x, y);
                                  }),
              GroundSet::grid1d(0.0, 1.0, 0.05)};
    f.default_suite = {"convexU", "convexUs"};
    f.expectations = {{"convexUs", false}};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"exN-favored-one",
              "R, x>=y iff y=x or y=1: N(x)=R for x!=1, N(1)={0}; T(x)=[-1,1], T(1) empty",
              Relation::predicate("exN", 1,
                                  [](const Point& p, const Point& q) {
                                    return near(q[0], p[0]) || near(q[0], 1.0);
                                  }),
              GroundSet::grid1d(0.0, 2.0, 0.01)};
    f.cones = [](const Point& p) { return near(p[0], 1.0) ? Cone::zero(1) : Cone::full(1); };
    f.landmarks = {Point{1.0}};
    f.lsc = true;
    f.default_suite = {"cone-selftest", "nstar-gap", "svip-inclusion", "maximal"};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"rmk35-line",
              "X=R x {0}, (x,0)>=(y,0) iff x>=y: continuous, convex^s, no maximal element, yet "
              "(0,1) in M1(x,0)\\{0} has <(0,1),(y,0)-(x,0)>=0",
              axis_order_relation("rmk35"), GroundSet::grid({{-2.0, 2.0, 0.05}, {0.0, 0.0, 1.0}})};
    f.ambient = GroundSet::grid({{-2.0, 2.5, 0.05}, {0.0, 0.0, 1.0}});
    f.cones = axis_order_cones();
    f.expected_maximal = std::vector<Point>{};
    f.landmarks = {Point{0.0, 0.0}};
    f.default_suite = {"cone-selftest", "nstar-gap", "maximal"};
    f.expectations = {{"nstar-gap", false}};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"rmk311-segment-K",
              "K=[0,1] x {0} under (x,0)>=(y,0) iff x>=y, map G=conv(M2 ∩ S) with unit ball on empty "
              "contours: SVIP(G,K)=K while the unique maximal element is (1,0)",
              axis_order_relation("rmk311"), GroundSet::grid({{0.0, 1.0, 0.01}, {0.0, 0.0, 1.0}})};
    f.cones = axis_order_cones();
    f.hull_mode = HullMode::G;
    f.expected_maximal = std::vector<Point>{Point{1.0, 0.0}};
    f.landmarks = {Point{0.5, 0.0}};
    f.default_suite = {"cone-selftest", "maximal", "svip-all", "svip-inclusion"};
    f.expectations = {{"svip-inclusion", false}};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"ex39-nonlsc",
              "R^2, (x,y)>=(a,b) iff x>=a and y=b=0: not lsc, N(x,0)={x*<=0} but N*(x,0)={x*<0}",
              axis_order_relation("ex39"), GroundSet::grid({{-1.0, 1.0, 0.25}, {-0.5, 0.5, 0.25}})};
    f.cones = axis_order_cones();
    f.landmarks = {Point{0.0, 0.0}};
    f.default_suite = {"cone-selftest", "nstar-gap"};
    f.expectations = {{"nstar-gap", false}};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"ex315-noncomplete",
              "R, x>=y iff (x,y)=(0,0) or (x>=y and y!=0): non-complete, ME(R)={0}, MVIP(N,R) empty",
              noncomplete_zero_relation(), GroundSet::grid1d(-1.0, 1.0, 0.01)};
    f.ambient = GroundSet::grid1d(-1.5, 1.5, 0.01);
    f.cones = noncomplete_zero_cones();
    f.expected_maximal = std::vector<Point>{Point{0.0}};
    f.landmarks = {Point{0.0}};
    f.lsc = true;
    f.default_suite = {"maximal", "maxima-subset", "mvip-empty", "uniqueness", "cone-selftest", "svip-inclusion"};
    f.expectations = {{"uniqueness", false}};
    reg.push_back(std::move(f));
  }
  for (int which : {1, 2}) {
    Fixture f{which == 1 ? "ex42-f1" : "ex42-f2",
              which == 1 ? "ex315 relation with f1(x,y)=y^2-x^2: N_f1(x)=]-inf,2x] (x!=0), R at 0"
                         : "ex315 relation with f2(x,y)=y-x: N_f2(x)=]-inf,1] (x!=0), R at 0",
              noncomplete_zero_relation(), GroundSet::grid1d(-5.0, 5.0, 0.5)};
    f.cones = noncomplete_zero_cones();
    GapFunction g;
    if (which == 1) {
      g = {"f1", [](const Point& x, const Point& y) { return y[0] * y[0] - x[0] * x[0]; }, std::nullopt,
           {true, true, false, true, true}};
      f.nf_upper_bound = [](double x) { return 2.0 * x; };
    } else {
      g = {"f2", [](const Point& x, const Point& y) { return y[0] - x[0]; }, 1.0, {true, true, true, true, true}};
      f.nf_upper_bound = [](double) { return 1.0; };
    }
    f.audit_sampler = uniform_box_sampler(1, -5.0, 5.0);
    f.gap = g;
    f.reference = Point{0.0};
    f.landmarks = {Point{0.0}};
    f.lsc = true;
    f.default_suite = {"nf-boundary", "gap-audit", "zero-maximality"};
    f.expectations = {{"gap-audit", false}, {"zero-maximality", false}};
    reg.push_back(std::move(f));
  }
  {
    auto u = [](const Point& x) { return -std::abs(x[0] - 0.7); };
    Fixture f{"utility-peak-0.7", "u(x)=-|x-0.7| on [0,1]: rational, continuous, single peak",
              Relation::utility("u=-|x-0.7|", 1, u, 1.0, true), GroundSet::grid1d(0.0, 1.0, 0.01)};
    f.cones = [](const Point& p) {
      if (near(p[0], 0.7)) return Cone::full(1);
      return Cone::generated({Point{sgn(p[0] - 0.7)}});
    };
    // Exact tie only: iterates pass within 1e-12 of the peak without landing on it.
    f.strict_normal = [](const Point& p) -> std::optional<Point> {
      if (p[0] == 0.7) return std::nullopt;
      return Point{sgn(p[0] - 0.7)};
    };
    f.gap = gap_from_utility(u, 1.0);
    f.audit_sampler = uniform_box_sampler(1, -1.0, 2.0);
    f.reference = Point{0.7};
    f.landmarks = {Point{0.7}, Point{0.3}};
    f.expected_maximal = std::vector<Point>{Point{0.7}};
    f.lsc = f.complete = true;
    f.default_suite = {"complete", "transitive", "fip", "convexU", "convexUs", "maximal", "maxima-subset",
                       "cone-selftest", "nstar-gap", "svip-inclusion", "uniqueness", "zero-maximality",
                       "gap-audit"};
    reg.push_back(std::move(f));
  }
  {
    const Point a{1.0, 2.0};
    auto u = [a](const Point& x) { return -distance(x, a); };
    Fixture f{"utility-radial-a(1,2)", "u(x)=-||x-(1,2)|| on R^2: strict contours are open balls around (1,2)",
              Relation::utility("u=-||x-a||", 2, u, 1.0, true),
              GroundSet::grid({{-1.0, 3.0, 0.1}, {0.0, 4.0, 0.1}})};
    f.cones = [a](const Point& p) { return p == a ? Cone::full(2) : Cone::generated({p - a}); };
    f.strict_normal = [a](const Point& p) -> std::optional<Point> {
      const Point d = p - a;
      if (norm(d) == 0.0) return std::nullopt;
      return d;
    };
    f.gap = gap_from_utility(u, 1.0);
    f.audit_sampler = uniform_box_sampler(2, -2.0, 4.0);
    f.reference = a;
    f.landmarks = {a, Point{0.0, 0.0}};
    f.expected_maximal = std::vector<Point>{a};
    f.lsc = f.complete = true;
    f.default_suite = {"maximal", "cone-selftest", "nstar-gap", "svip-inclusion", "uniqueness",
                       "zero-maximality", "gap-audit"};
    reg.push_back(std::move(f));
  }
  {
    auto u = [](const Point& x) { return -std::max(std::abs(x[0]) - 1.0, 0.0); };
    Fixture f{"two-plateau", "u(x)=-max(|x|-1,0) on [-2,2]: the maximal set [-1,1] is not a singleton",
              Relation::utility("u=-max(|x|-1,0)", 1, u, 1.0, true), GroundSet::grid1d(-2.0, 2.0, 0.01)};
    f.cones = [](const Point& p) {
      if (std::abs(p[0]) <= 1.0 + kPointEqualityTol) return Cone::full(1);
      return Cone::generated({Point{sgn(p[0])}});
    };
    f.strict_normal = [](const Point& p) -> std::optional<Point> {
      if (std::abs(p[0]) <= 1.0 + kPointEqualityTol) return std::nullopt;
      return Point{sgn(p[0])};
    };
    f.gap = gap_from_utility(u, 1.0);
    f.audit_sampler = uniform_box_sampler(1, -3.0, 3.0);
    f.reference = Point{0.0};
    f.landmarks = {Point{1.0}, Point{1.5}};
    f.lsc = f.complete = true;
    f.default_suite = {"maximal", "mvip-empty", "uniqueness", "cone-selftest", "svip-inclusion",
                       "zero-maximality"};
    reg.push_back(std::move(f));
  }
  {
    Fixture f{"trivial-zero-origin",
              "R^2, x>=y iff x=y=0 with f=0: non-complete, every strict contour empty, every point maximal",
              Relation::predicate("x=y=0", 2,
                                  [](const Point& p, const Point& q) { return is_zero(p, kPointEqualityTol) &&
                                                                              is_zero(q, kPointEqualityTol); }),
              GroundSet::grid({{-1.0, 1.0, 0.25}, {-1.0, 1.0, 0.25}})};
    f.cones = [](const Point&) { return Cone::full(2); };
    f.strict_normal = [](const Point&) -> std::optional<Point> { return std::nullopt; };
    f.gap = zero_gap(1.0);
    f.audit_sampler = uniform_box_sampler(2, -2.0, 2.0);
    f.default_suite = {"maximal", "convexUs", "zero-maximality", "gap-audit", "svip-inclusion"};
    reg.push_back(std::move(f));
  }
  return reg;
}

}  // namespace detail

struct SelfTestResult {
  std::size_t probes = 0;
  std::size_t mismatches = 0;
  std::size_t ambiguous = 0;
  std::vector<Point> first_mismatch;  // (base, probe)
};

/// Base points for sampled checks: the landmarks plus up to `count` evenly
/// spaced ground points.
inline std::vector<Point> sample_base_points(const Fixture& f, std::size_t count = 12) {
  std::vector<Point> out = f.landmarks;
  const auto& pts = f.ground.points();
  const std::size_t n = pts.size();
  const std::size_t take = std::min(count, n);
  for (std::size_t i = 0; i < take; ++i) {
    const auto& p = pts[take == 1 ? 0 : i * (n - 1) / (take - 1)];
    if (!contains_point(out, p)) out.push_back(p);
  }
  return out;
}

/// Closed-form cones against sampled normal_membership. Probes that lie
/// outside the closed-form cone but within a relative `band` of it are counted
/// as ambiguous and skipped; band 0 compares every probe.
inline SelfTestResult cone_self_test(const Fixture& f, std::uint64_t seed = 42, std::size_t probes_per_point = 100,
                                     double band = 0.1, double tol = kDefaultConeTol) {
  SelfTestResult r;
  if (!f.cones) return r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  const std::size_t n = f.ground.dim();
  for (const auto& x : sample_base_points(f)) {
    const Cone cone = (*f.cones)(x);
    const auto sample = sample_strict_contour(f.relation, x, default_sample_box(x, f.reference));
    for (std::size_t k = 0; k < probes_per_point; ++k) {
      std::vector<double> c(n);
      for (auto& v : c) v = k == 0 ? 0.0 : U(rng);
      const Point q(std::move(c));
      const bool closed = cone.contains(q);
      if (!closed && band > 0.0 && cone.tag() == Cone::Tag::generated && cone.distance_ratio(q) <= band) {
        ++r.ambiguous;
        continue;
      }
      ++r.probes;
      if (closed != normal_membership(sample, q, tol)) {
        if (r.mismatches++ == 0) r.first_mismatch = {x, q};
      }
    }
  }
  return r;
}

/// The fixture registry; the cone self-test runs once for every fixture at
/// first access and a failure aborts loading.
inline const std::vector<Fixture>& registry() {
  static const std::vector<Fixture> reg = [] {
    auto r = detail::build_registry();
    for (const auto& f : r) {
      const auto st = cone_self_test(f);
      if (st.mismatches != 0)
        throw Error("registry self-test failed for " + f.name + " at base " + st.first_mismatch[0].to_string() +
                    " probe " + st.first_mismatch[1].to_string());
    }
    return r;
  }();
  return reg;
}

inline std::string fixture_listing() {
  std::string s;
  for (const auto& f : registry()) s += "  " + f.name + "\n";
  return s;
}

inline const Fixture& get_fixture(const std::string& name) {
  for (const auto& f : registry())
    if (f.name == name) return f;
  throw UnknownFixture("unknown fixture '" + name + "'; available:\n" + fixture_listing());
}

}  // namespace maxel
