#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "maxel/cone.hpp"
#include "maxel/ground_set.hpp"
#include "maxel/point.hpp"
#include "maxel/properties.hpp"
#include "maxel/relation.hpp"

namespace maxel {

enum class VipKind { stampacchia, minty };

struct VipCertificate {
  Point solution;
  VipKind kind = VipKind::stampacchia;
  std::optional<Point> witness;  // Stampacchia only
  double tol = kDefaultConeTol;
};

using ConeOracle = std::function<Cone(const Point&)>;
using BodyOracle = std::function<ConvexBody(const Point&)>;

namespace detail {

// Largest violation of <z, y - xhat> >= -tol (1 + ||y - xhat||) over X.
inline double stampacchia_violation(const Point& z, const Point& xhat, const GroundSet& X, double tol) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& y : X.points()) {
    const Point d = y - xhat;
    worst = std::max(worst, -dot(z, d) - tol * (1.0 + norm(d)));
  }
  return worst;
}

inline bool stampacchia_ok(const Point& z, const Point& xhat, const GroundSet& X, double tol) {
  for (const auto& y : X.points()) {
    const Point d = y - xhat;
    if (dot(z, d) < -tol * (1.0 + norm(d))) return false;
  }
  return true;
}

// Projection of v onto the probability simplex.
inline std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (auto& x : v) x = std::max(0.0, x - theta);
  return v;
}

// Projected subgradient on max_{y in A} -<V w, y - xhat> - tol (1 + ||y - xhat||)
// over the simplex of weights. Returns a combination with no violation on A.
inline std::optional<Point> simplex_subgradient(const std::vector<Point>& V, const Point& xhat,
                                                const std::vector<Point>& A, double tol, int iterations) {
  const std::size_t dim = xhat.dim();
  std::vector<double> w(V.size(), 1.0 / static_cast<double>(V.size()));
  auto combo = [&](const std::vector<double>& wt) {
    std::vector<double> c(dim, 0.0);
    for (std::size_t i = 0; i < V.size(); ++i)
      for (std::size_t d = 0; d < dim; ++d) c[d] += wt[i] * V[i][d];
    return Point(c);
  };
  for (int it = 1; it <= iterations; ++it) {
    const Point z = combo(w);
    const Point* worst_y = nullptr;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& y : A) {
      const Point d = y - xhat;
      const double v = -dot(z, d) - tol * (1.0 + norm(d));
      if (v > worst) {
        worst = v;
        worst_y = &y;
      }
    }
    if (worst <= 0.0) return z;
    // d/dw_i of -<V w, y - xhat> is -<V_i, y - xhat>
    const Point d = *worst_y - xhat;
    const double step = 1.0 / (norm(d) * std::sqrt(static_cast<double>(it)));
    for (std::size_t i = 0; i < V.size(); ++i) w[i] += step * dot(V[i], d);
    w = project_simplex(std::move(w));
  }
  return std::nullopt;
}

inline const Point* worst_constraint(const Point& z, const Point& xhat, const GroundSet& X, double tol) {
  const Point* worst_y = nullptr;
  double worst = 0.0;
  for (const auto& y : X.points()) {
    const Point d = y - xhat;
    const double v = -dot(z, d) - tol * (1.0 + norm(d));
    if (v > worst) {
      worst = v;
      worst_y = &y;
    }
  }
  return worst_y;
}

// Segment [a, b]: each constraint cuts an interval of t in z = a + t (b - a).
inline std::optional<Point> stampacchia_segment(const Point& a, const Point& b, const Point& xhat,
                                                const GroundSet& X, double tol) {
  double lo = 0.0, hi = 1.0;
  const Point e = b - a;
  for (const auto& y : X.points()) {
    const Point d = y - xhat;
    // <a, d> + t <e, d> >= -tol (1 + ||d||)
    const double c0 = dot(a, d) + tol * (1.0 + norm(d));
    const double c1 = dot(e, d);
    if (c1 > 0.0)
      lo = std::max(lo, -c0 / c1);
    else if (c1 < 0.0)
      hi = std::min(hi, -c0 / c1);
    else if (c0 < 0.0)
      return std::nullopt;
    if (lo > hi) return std::nullopt;
  }
  const Point z = a + (0.5 * (lo + hi)) * e;
  if (!stampacchia_ok(z, xhat, X, tol)) return std::nullopt;
  return z;
}

// Constraint generation: solve on a growing active set, then check all of X.
inline std::optional<Point> stampacchia_subgradient(const ConvexBody& body, const Point& xhat,
                                                    const GroundSet& X, double tol,
                                                    int rounds = 60, int iterations = 20000) {
  const auto& V = body.vertices();
  std::vector<Point> active;
  std::vector<double> c(body.dim(), 0.0);
  for (const auto& v : V)
    for (std::size_t d = 0; d < body.dim(); ++d) c[d] += v[d] / static_cast<double>(V.size());
  Point z(c);
  for (int r = 0; r < rounds; ++r) {
    const Point* y = worst_constraint(z, xhat, X, tol);
    if (!y) return z;
    if (contains_point(active, *y)) return std::nullopt;
    active.push_back(*y);
    auto next = simplex_subgradient(V, xhat, active, tol, iterations);
    if (!next) return std::nullopt;
    z = *next;
  }
  return std::nullopt;
}

}  // namespace detail

/// Stampacchia test at xhat: is there z in body with <z, y - xhat> >= 0 on X?
///
/// Candidates are tried in a fixed order (origin, vertices, centroid, pairwise
/// midpoints). The origin satisfies every inequality, so a body containing it
/// certifies xhat outright. Segments are then solved exactly; larger bodies fall back to
/// projected subgradient with constraint generation over X.
inline std::optional<VipCertificate> svip_membership(const ConvexBody& body, const Point& xhat,
                                                     const GroundSet& X, double tol = kDefaultConeTol) {
  require_dim(X.dim(), xhat.dim());
  if (body.is_empty()) return std::nullopt;
  require_dim(body.dim(), xhat.dim());
  auto certify = [&](const Point& z) {
    return VipCertificate{xhat, VipKind::stampacchia, z, tol};
  };
  const Point origin = Point::zero(body.dim());
  if (body.contains(origin, tol)) return certify(origin);
  const auto& V = body.vertices();
  for (const auto& v : V)
    if (detail::stampacchia_ok(v, xhat, X, tol)) return certify(v);
  {
    std::vector<double> c(body.dim(), 0.0);
    for (const auto& v : V)
      for (std::size_t d = 0; d < body.dim(); ++d) c[d] += v[d] / static_cast<double>(V.size());
    const Point centroid(c);
    if (detail::stampacchia_ok(centroid, xhat, X, tol)) return certify(centroid);
  }
  for (std::size_t i = 0; i < V.size(); ++i)
    for (std::size_t j = i + 1; j < V.size(); ++j) {
      const Point mid = 0.5 * (V[i] + V[j]);
      if (detail::stampacchia_ok(mid, xhat, X, tol)) return certify(mid);
    }
  std::vector<Point> distinct;
  for (const auto& v : V)
    if (!contains_point(distinct, v)) distinct.push_back(v);
  if (distinct.size() == 1) return std::nullopt;
  if (distinct.size() == 2) {
    if (auto z = detail::stampacchia_segment(distinct[0], distinct[1], xhat, X, tol)) return certify(*z);
    return std::nullopt;
  }
  if (auto z = detail::stampacchia_subgradient(body, xhat, X, tol)) return certify(*z);
  return std::nullopt;
}

/// Re-validates a Stampacchia certificate: witness inside the body and every
/// inequality satisfied.
inline bool validate_certificate(const VipCertificate& cert, const ConvexBody& body, const GroundSet& X) {
  if (cert.kind != VipKind::stampacchia || !cert.witness) return false;
  if (!body.contains(*cert.witness, cert.tol)) return false;
  return detail::stampacchia_violation(*cert.witness, cert.solution, X, cert.tol) <= 0.0;
}

/// Stampacchia solutions over X in ground order.
inline std::vector<Point> svip_solutions(const BodyOracle& bodies, const GroundSet& X,
                                         double tol = kDefaultConeTol) {
  std::vector<Point> out;
  for (const auto& x : X.points())
    if (svip_membership(bodies(x), x, X, tol)) out.push_back(x);
  return out;
}

/// Minty test at xhat: <g, xhat - y> <= tol (1 + ||xhat - y||) for every y in
/// X and every unit generator g of the cone at y. Full cones are probed with
/// the +-axis fan and the direction xhat - y itself.
inline bool mvip_membership(const ConeOracle& cones, const Point& xhat, const GroundSet& X,
                            double tol = kDefaultConeTol) {
  require_dim(X.dim(), xhat.dim());
  for (const auto& y : X.points()) {
    const Cone c = cones(y);
    const Point d = xhat - y;
    const double nd = norm(d);
    const double bound = tol * (1.0 + nd);
    switch (c.tag()) {
      case Cone::Tag::zero: break;
      case Cone::Tag::full: {
        if (nd > 0.0 && nd > bound) return false;
        for (std::size_t i = 0; i < d.dim(); ++i)
          if (std::abs(d[i]) > bound) return false;
        break;
      }
      case Cone::Tag::generated:
        for (const auto& g : c.unit_generators())
          if (dot(g, d) > bound) return false;
        break;
    }
  }
  return true;
}

inline std::vector<Point> mvip_solutions(const ConeOracle& cones, const GroundSet& X,
                                         double tol = kDefaultConeTol) {
  std::vector<Point> out;
  for (const auto& x : X.points())
    if (mvip_membership(cones, x, X, tol)) out.push_back(x);
  return out;
}

/// Checks SVIP(T, X) ⊂ ME(X). The report lists the first violator.
inline PropertyReport svip_inclusion_check(const Relation& rel, const GroundSet& X, const BodyOracle& bodies,
                                           double tol = kDefaultConeTol,
                                           std::span<const Point> competitors = {}) {
  const auto me = competitors.empty() ? maximal_elements(rel, X) : maximal_elements(rel, X, competitors);
  PropertyReport rep{Property::svip_inclusion};
  for (const auto& x : svip_solutions(bodies, X, tol))
    if (!contains_point(me, x)) {
      rep.holds = false;
      rep.witness = {x};
      break;
    }
  return rep;
}

struct UniquenessResult {
  std::vector<Point> maximal;
  std::vector<Point> minty;
  bool singleton = false;
  bool equal = false;
  /// [ME is a singleton] <=> [ME = MVIP]
  bool equivalence_holds = false;
};

inline UniquenessResult uniqueness_check(const Relation& rel, const ConeOracle& cones, const GroundSet& X,
                                         double tol = kDefaultConeTol,
                                         std::span<const Point> competitors = {}) {
  UniquenessResult r;
  r.maximal = competitors.empty() ? maximal_elements(rel, X) : maximal_elements(rel, X, competitors);
  r.minty = mvip_solutions(cones, X, tol);
  r.singleton = r.maximal.size() == 1;
  r.equal = same_point_set(r.maximal, r.minty);
  r.equivalence_holds = r.singleton == r.equal;
  return r;
}

}  // namespace maxel
