#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "maxel/fixtures.hpp"
#include "maxel/vip.hpp"

using namespace maxel;

namespace {

BodyOracle bodies_of(const Fixture& f, std::optional<HullMode> mode = std::nullopt) {
  return [&f, mode](const Point& x) { return f.body(x, mode); };
}

// <z, y - xhat> >= -tol (1 + ||y - xhat||) on every y, recomputed here.
bool stampacchia_holds(const Point& z, const Point& xhat, const GroundSet& X, double tol) {
  for (const auto& y : X.points()) {
    const Point d = y - xhat;
    if (dot(z, d) < -tol * (1.0 + norm(d))) return false;
  }
  return true;
}

Point random_unit(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> c(dim);
  for (auto& v : c) v = N(rng);
  Point p(std::move(c));
  return (1.0 / norm(p)) * p;
}

}  // namespace

TEST(Stampacchia, SegmentFixtureModeGCertifiesMidpoint) {
  const auto& f = get_fixture("rmk311-segment-K");
  const Point xhat{0.5, 0.0};
  const auto body = f.body(xhat, HullMode::G);
  const auto cert = svip_membership(body, xhat, f.ground);
  ASSERT_TRUE(cert.has_value());
  ASSERT_TRUE(cert->witness.has_value());
  EXPECT_EQ(*cert->witness, (Point{0.0, 0.0}));
  EXPECT_TRUE(validate_certificate(*cert, body, f.ground));
}

TEST(Stampacchia, PeakUtilityOnlyAtPeak) {
  const auto& f = get_fixture("utility-peak-0.7");
  const auto sol = svip_solutions(bodies_of(f), f.ground);
  ASSERT_EQ(sol.size(), 1u);
  EXPECT_EQ(sol[0], Point{0.7});
}

TEST(Stampacchia, FavoredPointEmptyBodyAndInteriorCertificate) {
  const auto& f = get_fixture("exN-favored-one");
  EXPECT_TRUE(f.body(Point{1.0}).is_empty());
  EXPECT_FALSE(svip_membership(f.body(Point{1.0}), Point{1.0}, f.ground).has_value());
  const auto cert = svip_membership(f.body(Point{0.5}), Point{0.5}, f.ground);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(*cert->witness, Point{0.0});
}

TEST(Stampacchia, EmptyBodyNeverSolves) {
  const auto X = GroundSet::grid1d(0.0, 1.0, 0.5);
  EXPECT_FALSE(svip_membership(ConvexBody::empty(1), Point{0.5}, X).has_value());
}

TEST(Stampacchia, CertificatesRevalidate) {
  for (const char* name : {"utility-peak-0.7", "exN-favored-one", "rmk311-segment-K", "two-plateau"}) {
    const auto& f = get_fixture(name);
    std::size_t certified = 0;
    for (const auto& x : f.ground.points()) {
      const auto body = f.body(x);
      const auto cert = svip_membership(body, x, f.ground);
      if (!cert) continue;
      ++certified;
      EXPECT_EQ(cert->solution, x);
      EXPECT_EQ(cert->kind, VipKind::stampacchia);
      EXPECT_TRUE(validate_certificate(*cert, body, f.ground)) << name << " " << x.to_string();
      EXPECT_TRUE(body.contains(*cert->witness, cert->tol));
      EXPECT_TRUE(stampacchia_holds(*cert->witness, x, f.ground, cert->tol)) << name;
    }
    EXPECT_GT(certified, 0u) << name;
  }
}

TEST(Stampacchia, SegmentSolverMatchesDenseSweep) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int feasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(Point{U(rng), U(rng)});
    const auto X = GroundSet::explicit_points(pts);
    const Point xhat = pts[0];
    const Point a = random_unit(rng, 2);
    const Point b = random_unit(rng, 2);
    const double tol = 1e-9;
    bool dense = false;
    for (int i = 0; i <= 10000 && !dense; ++i) {
      const double t = i / 10000.0;
      dense = stampacchia_holds((1.0 - t) * a + t * b, xhat, X, tol);
    }
    const auto z = detail::stampacchia_segment(a, b, xhat, X, tol);
    if (dense) {
      ++feasible;
      EXPECT_TRUE(z.has_value()) << trial;
    }
    if (z) {
      EXPECT_TRUE(stampacchia_holds(*z, xhat, X, tol)) << trial;
      EXPECT_LE(ConvexBody::hull({a, b}).distance_to(*z), 1e-12);
    }
  }
  EXPECT_GT(feasible, 20);
}

TEST(Minty, NoncompleteZeroHasNoSolution) {
  const auto& f = get_fixture("ex315-noncomplete");
  EXPECT_TRUE(mvip_solutions(*f.cones, f.ground).empty());
}

TEST(Minty, PeakUtilityOnlyAtPeak) {
  const auto& f = get_fixture("utility-peak-0.7");
  const auto sol = mvip_solutions(*f.cones, f.ground);
  ASSERT_EQ(sol.size(), 1u);
  EXPECT_EQ(sol[0], Point{0.7});
}

TEST(Minty, SingletonGroundAlwaysSolves) {
  const auto X = GroundSet::explicit_points({Point{0.3, -2.0}});
  const ConeOracle full = [](const Point&) { return Cone::full(2); };
  const ConeOracle fan = [](const Point&) { return Cone::generated({Point{1.0, 0.0}, Point{0.0, 1.0}}); };
  EXPECT_TRUE(mvip_membership(full, Point{0.3, -2.0}, X));
  EXPECT_TRUE(mvip_membership(fan, Point{0.3, -2.0}, X));
}

TEST(Minty, GeneratorVerdictSurvivesConvexCombinations) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, 8);
  const double tol = 1e-9;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Point> gens;
    for (int i = 0, n = count(rng); i < n; ++i) gens.push_back(random_unit(rng, 2));
    const Cone cone = Cone::generated(gens);
    const Point y{U(rng), U(rng)};
    const Point xhat{U(rng), U(rng)};
    const auto X = GroundSet::explicit_points({y, xhat});
    const ConeOracle oracle = [&](const Point& p) { return p == y ? cone : Cone::zero(2); };
    const Point d = xhat - y;
    const double bound = tol * (1.0 + norm(d));

    bool by_generators = true;
    for (const auto& g : gens) by_generators = by_generators && dot(g, d) <= bound;
    ASSERT_EQ(mvip_membership(oracle, xhat, X, tol), by_generators) << trial;

    std::uniform_real_distribution<double> W(0.0, 1.0);
    for (int s = 0; s < 1000; ++s) {
      std::vector<double> w(gens.size());
      double total = 0.0;
      for (auto& v : w) total += v = W(rng);
      Point c = Point::zero(2);
      for (std::size_t i = 0; i < gens.size(); ++i) c = c + (w[i] / total) * gens[i];
      if (by_generators) {
        ASSERT_LE(dot(c, d), bound * (1.0 + 1e-12)) << trial;
      }
    }
  }
}

TEST(Inclusion, HoldsOnLscFixtures) {
  const auto& exn = get_fixture("exN-favored-one");
  const auto rep = svip_inclusion_check(exn.relation, exn.ground, bodies_of(exn));
  EXPECT_TRUE(rep.holds);
  // Both sides are the grid without 1.
  const auto sol = svip_solutions(bodies_of(exn), exn.ground);
  EXPECT_EQ(sol.size(), exn.ground.size() - 1);
  EXPECT_FALSE(contains_point(sol, Point{1.0}));
  EXPECT_TRUE(same_point_set(sol, maximal_elements(exn.relation, exn.ground)));

  const auto& peak = get_fixture("utility-peak-0.7");
  EXPECT_TRUE(svip_inclusion_check(peak.relation, peak.ground, bodies_of(peak)).holds);
}

TEST(Inclusion, FailsOnSegmentFixtureModeG) {
  const auto& f = get_fixture("rmk311-segment-K");
  const auto sol = svip_solutions(bodies_of(f, HullMode::G), f.ground);
  EXPECT_EQ(sol.size(), f.ground.size());
  const auto me = maximal_elements(f.relation, f.ground);
  ASSERT_EQ(me.size(), 1u);
  EXPECT_EQ(me[0], (Point{1.0, 0.0}));
  const auto rep = svip_inclusion_check(f.relation, f.ground, bodies_of(f, HullMode::G));
  EXPECT_FALSE(rep.holds);
  ASSERT_EQ(rep.witness.size(), 1u);
  EXPECT_EQ(rep.witness[0], (Point{0.0, 0.0}));
}

TEST(Uniqueness, PeakBothSidesSingleton) {
  const auto& f = get_fixture("utility-peak-0.7");
  const auto r = uniqueness_check(f.relation, *f.cones, f.ground);
  EXPECT_TRUE(r.singleton);
  EXPECT_TRUE(r.equal);
  EXPECT_TRUE(r.equivalence_holds);
}

TEST(Uniqueness, NoncompleteZeroBreaksEquivalence) {
  const auto& f = get_fixture("ex315-noncomplete");
  const auto comp = f.competitors();
  const auto r = uniqueness_check(f.relation, *f.cones, f.ground, kDefaultConeTol, comp);
  ASSERT_EQ(r.maximal.size(), 1u);
  EXPECT_EQ(r.maximal[0], Point{0.0});
  EXPECT_TRUE(r.minty.empty());
  EXPECT_FALSE(r.equivalence_holds);
}

TEST(Uniqueness, TwoPlateauHoldsVacuously) {
  const auto& f = get_fixture("two-plateau");
  const auto r = uniqueness_check(f.relation, *f.cones, f.ground);
  EXPECT_EQ(r.maximal.size(), 201u);
  EXPECT_TRUE(r.minty.empty());
  EXPECT_FALSE(r.singleton);
  EXPECT_TRUE(r.equivalence_holds);
}

TEST(Uniqueness, NonemptySidesAreEqualSingletons) {
  for (const auto& f : registry()) {
    if (!f.cones) continue;
    const auto comp = f.competitors();
    const auto me = maximal_elements(f.relation, f.ground, comp);
    const auto mv = mvip_solutions(*f.cones, f.ground);
    if (me.empty() || mv.empty()) continue;
    EXPECT_EQ(me.size(), 1u) << f.name;
    EXPECT_TRUE(same_point_set(me, mv)) << f.name;
  }
}

TEST(Uniqueness, MaximalPointsSatisfyMintyAgainstNonmaximal) {
  for (const char* name : {"utility-peak-0.7", "two-plateau", "utility-radial-a(1,2)"}) {
    const auto& f = get_fixture(name);
    ASSERT_TRUE(f.complete);
    const auto me = maximal_elements(f.relation, f.ground);
    ASSERT_FALSE(me.empty());
    for (const auto& y : f.ground.points()) {
      if (contains_point(me, y)) continue;
      const Cone cone = (*f.cones)(y);
      for (const auto& g : cone.generators())
        for (const auto& xhat : me) ASSERT_LE(dot(g, xhat - y), 1e-9) << name << " y=" << y.to_string();
    }
  }
  // Without completeness the inequality breaks at the maximal point 0.
  const auto& f = get_fixture("ex315-noncomplete");
  int violated = 0;
  for (const auto& y : f.ground.points()) {
    if (y == Point{0.0}) continue;
    const Cone cone = (*f.cones)(y);
    for (const auto& g : cone.generators()) violated += dot(g, Point{0.0} - y) > 1e-9;
  }
  EXPECT_GT(violated, 0);
}
