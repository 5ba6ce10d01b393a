#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "maxel/detail/nnls.hpp"
#include "maxel/ground_set.hpp"
#include "maxel/point.hpp"
#include "maxel/relation.hpp"

namespace maxel {

inline constexpr double kDefaultConeTol = 1e-9;

/// Density of the unit-sphere net standing in for a full unit ball.
struct SphereNet {
  std::size_t planar_directions = 360;
};

/// Fixed symmetric set of unit vectors: {-1, 1} on the line, an angular net in
/// the plane, the +-e_i fan plus edge and corner diagonals in R^3, and the
/// +-e_i fan beyond that.
inline std::vector<Point> unit_sphere_net(std::size_t dim, const SphereNet& net = {}) {
  std::vector<Point> out;
  if (dim == 1) return {Point{-1.0}, Point{1.0}};
  if (dim == 2) {
    for (std::size_t k = 0; k < net.planar_directions; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(net.planar_directions);
      out.push_back(Point{std::cos(a), std::sin(a)});
    }
    return out;
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (double s : {1.0, -1.0}) {
      std::vector<double> c(dim, 0.0);
      c[i] = s;
      out.emplace_back(c);
    }
  if (dim == 3) {
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j)
        for (double si : {1.0, -1.0})
          for (double sj : {1.0, -1.0}) {
            std::vector<double> c(3, 0.0);
            c[i] = si * r2;
            c[j] = sj * r2;
            out.emplace_back(c);
          }
    for (double a : {1.0, -1.0})
      for (double b : {1.0, -1.0})
        for (double c : {1.0, -1.0}) out.push_back(Point{a * r3, b * r3, c * r3});
  }
  return out;
}

/// Closed convex cone given by finitely many generators, or one of the two
/// trivial cones (the whole space, the origin).
class Cone {
 public:
  enum class Tag { full, zero, generated };

  static Cone full(std::size_t dim, double tol = kDefaultConeTol) { return Cone(dim, Tag::full, {}, tol); }
  static Cone zero(std::size_t dim, double tol = kDefaultConeTol) { return Cone(dim, Tag::zero, {}, tol); }

  static Cone generated(std::vector<Point> generators, double tol = kDefaultConeTol) {
    if (generators.empty()) throw InvalidArgument("generated cone needs at least one generator");
    const std::size_t dim = generators.front().dim();
    for (const auto& g : generators) {
      require_dim(dim, g.dim());
      if (is_zero(g)) throw InvalidArgument("cone generators must be nonzero");
    }
    return Cone(dim, Tag::generated, std::move(generators), tol);
  }

  Tag tag() const { return tag_; }
  std::size_t dim() const { return dim_; }
  double tol() const { return tol_; }
  const std::vector<Point>& generators() const { return generators_; }

  std::vector<Point> unit_generators() const {
    std::vector<Point> out;
    for (const auto& g : generators_) out.push_back((1.0 / norm(g)) * g);
    return out;
  }

  /// Membership of q, decided on the normalized query so the answer is
  /// invariant under positive scaling.
  bool contains(const Point& q) const {
    require_dim(dim_, q.dim());
    const double nq = norm(q);
    if (nq == 0.0 || tag_ == Tag::full) return true;
    if (tag_ == Tag::zero) return nq <= tol_;
    return distance_ratio(q) <= tol_;
  }

  /// dist(q, cone) / ||q|| for generated cones (0 for q = 0).
  double distance_ratio(const Point& q) const {
    const double nq = norm(q);
    if (nq == 0.0 || tag_ == Tag::full) return 0.0;
    if (tag_ == Tag::zero) return 1.0;
    const auto gens = unit_generators();
    Eigen::MatrixXd A(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(gens.size()));
    Eigen::VectorXd b(static_cast<Eigen::Index>(dim_));
    for (std::size_t j = 0; j < gens.size(); ++j)
      for (std::size_t i = 0; i < dim_; ++i)
        A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gens[j][i];
    for (std::size_t i = 0; i < dim_; ++i) b(static_cast<Eigen::Index>(i)) = q[i] / nq;
    return detail::nnls(A, b).residual;
  }

 private:
  Cone(std::size_t dim, Tag tag, std::vector<Point> gens, double tol)
      : dim_(dim), tag_(tag), generators_(std::move(gens)), tol_(tol) {
    if (dim_ == 0) throw InvalidArgument("cone dimension must be >= 1");
    if (tol_ < 0.0) throw InvalidArgument("cone tolerance must be nonnegative");
  }

  std::size_t dim_;
  Tag tag_;
  std::vector<Point> generators_;
  double tol_;
};

/// Convex hull of finitely many vertices (possibly empty).
class ConvexBody {
 public:
  static ConvexBody empty(std::size_t dim) {
    ConvexBody b;
    b.dim_ = dim;
    return b;
  }

  static ConvexBody hull(std::vector<Point> vertices) {
    if (vertices.empty()) throw InvalidArgument("hull needs vertices; use ConvexBody::empty");
    ConvexBody b;
    b.dim_ = vertices.front().dim();
    for (const auto& v : vertices) require_dim(b.dim_, v.dim());
    b.vertices_ = std::move(vertices);
    return b;
  }

  bool is_empty() const { return vertices_.empty(); }
  std::size_t dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }

  /// Distance from q to the hull, via convex-weight least squares; +inf when empty.
  double distance_to(const Point& q) const {
    require_dim(dim_, q.dim());
    if (is_empty()) return std::numeric_limits<double>::infinity();
    constexpr double weight = 100.0;  // enforces sum(w) = 1
    const auto m = static_cast<Eigen::Index>(dim_ + 1);
    const auto n = static_cast<Eigen::Index>(vertices_.size());
    Eigen::MatrixXd A(m, n);
    Eigen::VectorXd b(m);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < dim_; ++i)
        A(static_cast<Eigen::Index>(i), j) = vertices_[static_cast<std::size_t>(j)][i];
      A(m - 1, j) = weight;
    }
    for (std::size_t i = 0; i < dim_; ++i) b(static_cast<Eigen::Index>(i)) = q[i];
    b(m - 1) = weight;
    auto res = detail::nnls(A, b);
    const double total = res.x.sum();
    if (total <= 0.0) return std::numeric_limits<double>::infinity();
    Eigen::VectorXd w = res.x / total;
    Eigen::VectorXd combo = A.topRows(m - 1) * w;
    return (combo - b.head(m - 1)).norm();
  }

  bool contains(const Point& q, double tol = kDefaultConeTol) const { return distance_to(q) <= tol; }

 private:
  std::size_t dim_ = 0;
  std::vector<Point> vertices_;
};

/// Finite stand-in for the strict upper contour of `base`.
struct ContourSample {
  Point base;
  std::vector<Point> points;
  bool empty_contour = false;
};

/// Axis-aligned sampling box around a base point, refined near the base.
/// A coarse lattice over the box plus nested finer lattices around the base
/// point: level l has radius radius/2^l and step radius/(2^l refine_count),
/// down to min_refine_radius. The nesting resolves contours that meet the
/// base point tangentially.
struct SampleBox {
  double radius = 2.0;
  double step = 0.01;
  std::size_t refine_count = 50;
  double min_refine_radius = 1e-3;
};

/// Box radius 2*||x - reference|| (at least 1), step 0.01 on the line and
/// 0.05 per axis otherwise.
inline SampleBox default_sample_box(const Point& x, const std::optional<Point>& reference = std::nullopt) {
  SampleBox box;
  box.radius = reference ? std::max(1.0, 2.0 * distance(x, *reference)) : 2.0;
  box.step = x.dim() == 1 ? 0.01 : 0.05;
  return box;
}

/// Candidate offsets of the box, base point excluded.
inline std::vector<Point> box_candidates(const Point& x, const SampleBox& box) {
  const std::size_t n = x.dim();
  std::vector<Point> out;
  auto emit_lattice = [&](double step, double radius) {
    const auto k = static_cast<long>(std::floor(radius / step + 1e-9));
    const std::size_t side = static_cast<std::size_t>(2 * k + 1);
    std::size_t total = 1;
    for (std::size_t d = 0; d < n; ++d) total *= side;
    std::vector<long> idx(n, -k);
    std::vector<double> c(n);
    for (std::size_t t = 0; t < total; ++t) {
      bool all_zero = true;
      for (std::size_t d = 0; d < n; ++d) {
        c[d] = x[d] + static_cast<double>(idx[d]) * step;
        all_zero = all_zero && idx[d] == 0;
      }
      if (!all_zero) out.emplace_back(c);
      for (std::size_t d = n; d-- > 0;) {
        if (++idx[d] <= k) break;
        idx[d] = -k;
      }
    }
  };
  double step = box.step;
  // Keep the lattice below ~2e5 points in high dimension.
  while (std::pow(2.0 * box.radius / step + 1.0, static_cast<double>(n)) > 2e5) step *= 2.0;
  emit_lattice(step, box.radius);
  // Fewer points per refinement level above two dimensions.
  const double count = static_cast<double>(n <= 2 ? box.refine_count : std::min<std::size_t>(box.refine_count, 8));
  if (count < 1.0) return out;
  for (double r = box.radius / 2.0; r >= box.min_refine_radius; r /= 2.0)
    if (r / count < step) emit_lattice(r / count, r);
  return out;
}

/// Filters candidates down to those strictly preferred to x.
inline ContourSample sample_strict_contour(const Relation& rel, const Point& x,
                                           std::span<const Point> candidates) {
  ContourSample s{x, {}, false};
  for (const auto& y : candidates)
    if (rel.strictly_prefers(y, x)) s.points.push_back(y);
  s.empty_contour = s.points.empty();
  return s;
}

inline ContourSample sample_strict_contour(const Relation& rel, const Point& x, const SampleBox& box) {
  const auto cands = box_candidates(x, box);
  return sample_strict_contour(rel, x, cands);
}

/// x* in N(x): <x*, y - x> <= tol (1 + ||x*|| ||y - x||) for every sampled y.
inline bool normal_membership(const ContourSample& sample, const Point& xstar,
                              double tol = kDefaultConeTol) {
  require_dim(sample.base.dim(), xstar.dim());
  if (sample.empty_contour) return true;
  const double nx = norm(xstar);
  for (const auto& y : sample.points) {
    const Point d = y - sample.base;
    if (dot(xstar, d) > tol * (1.0 + nx * norm(d))) return false;
  }
  return true;
}

/// x* in N*(x) with a relative margin: <x*, y - x> <= -margin ||y - x||.
inline bool strict_normal_membership(const ContourSample& sample, const Point& xstar, double margin) {
  require_dim(sample.base.dim(), xstar.dim());
  if (!(margin > 0.0)) throw InvalidArgument("strict membership margin must be positive");
  if (sample.empty_contour) return true;
  for (const auto& y : sample.points) {
    const Point d = y - sample.base;
    if (dot(xstar, d) > -margin * norm(d)) return false;
  }
  return true;
}

enum class HullMode { T, G };

/// Truncated hull conv(N(x) ∩ S[0,1]) of a cone, approximated on the sphere
/// net. Mode G replaces the body by the closed unit ball when the caller
/// reports an empty strict contour.
inline ConvexBody build_T(const Cone& cone, HullMode mode, bool strict_contour_empty = false,
                          const SphereNet& net = {}) {
  if (mode == HullMode::G && strict_contour_empty)
    return ConvexBody::hull(unit_sphere_net(cone.dim(), net));
  switch (cone.tag()) {
    case Cone::Tag::full: return ConvexBody::hull(unit_sphere_net(cone.dim(), net));
    case Cone::Tag::zero: return ConvexBody::empty(cone.dim());
    case Cone::Tag::generated: break;
  }
  auto verts = cone.unit_generators();
  if (cone.dim() > 1)
    for (const auto& u : unit_sphere_net(cone.dim(), net))
      if (cone.contains(u) && !contains_point(verts, u)) verts.push_back(u);
  return ConvexBody::hull(std::move(verts));
}

/// For a complete relation: x* in N(x) iff every ground y with <x*, y - x> > 0
/// satisfies x >= y. Returns whether both sides agree for every probe.
inline bool complete_equivalence_check(const Relation& rel, const Point& x,
                                       std::span<const Point> probes, const GroundSet& ground,
                                       double tol = kDefaultConeTol) {
  const auto sample = sample_strict_contour(rel, x, ground.points());
  for (const auto& p : probes) {
    const bool lhs = normal_membership(sample, p, tol);
    bool rhs = true;
    const double np = norm(p);
    for (const auto& y : ground.points()) {
      const Point d = y - x;
      if (dot(p, d) > tol * (1.0 + np * norm(d)) && !rel.holds(x, y)) {
        rhs = false;
        break;
      }
    }
    if (lhs != rhs) return false;
  }
  return true;
}

}  // namespace maxel
