#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxel/ground_set.hpp"
#include "maxel/point.hpp"
#include "maxel/relation.hpp"

namespace maxel {

enum class ContourKind { upper, strict_upper, lower, strict_lower };

enum class Property {
  reflexive,
  complete,
  transitive,
  m_fip,
  fip,
  convex_upper,
  convex_strict_upper,
  svip_inclusion,
  zero_maximality,
};

inline std::string to_string(Property p) {
  switch (p) {
    case Property::reflexive: return "reflexive";
    case Property::complete: return "complete";
    case Property::transitive: return "transitive";
    case Property::m_fip: return "m-FIP";
    case Property::fip: return "FIP";
    case Property::convex_upper: return "convexU";
    case Property::convex_strict_upper: return "convexUs";
    case Property::svip_inclusion: return "svip-inclusion";
    case Property::zero_maximality: return "zero-maximality";
  }
  return "?";
}

/// Verdict of an exhaustive check over a finite ground set.
///
/// A failing report always carries a witness; the layout depends on the
/// property:
///   reflexive           (x)              with not x >= x
///   complete            (x, y)           with neither x >= y nor y >= x
///   transitive          (x, y, z)        with x >= y, y >= z, not x >= z
///   m-FIP / FIP         (x_1, ..., x_k)  whose upper contours do not meet
///   convexU / convexUs  (x, a, b, p)     a, b in the contour of x, p on [a, b] outside it
///   svip-inclusion      (x)              a Stampacchia solution that is not maximal
///   zero-maximality     (x)              where 0 in N_f(x) disagrees with maximality
/// A skipped report (precondition unmet) has holds == false and a note.
struct PropertyReport {
  Property property;
  std::size_t m = 0;
  bool holds = true;
  std::vector<Point> witness;
  bool skipped = false;
  std::string note;
};

namespace detail {

inline bool in_contour(const Relation& rel, const Point& x, const Point& y, ContourKind which) {
  switch (which) {
    case ContourKind::upper: return rel.holds(y, x);
    case ContourKind::strict_upper: return rel.strictly_prefers(y, x);
    case ContourKind::lower: return rel.holds(x, y);
    case ContourKind::strict_lower: return rel.strictly_prefers(x, y);
  }
  return false;
}

// upper[i][j] == (ground[j] >= ground[i]), i.e. j in U(ground[i]).
inline std::vector<std::vector<char>> upper_table(const Relation& rel, const GroundSet& ground) {
  const auto& pts = ground.points();
  std::vector<std::vector<char>> t(pts.size(), std::vector<char>(pts.size(), 0));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) t[i][j] = rel.holds(pts[j], pts[i]) ? 1 : 0;
  return t;
}

inline bool family_meets(const std::vector<std::vector<char>>& upper,
                         const std::vector<std::size_t>& family) {
  const std::size_t n = upper.size();
  for (std::size_t j = 0; j < n; ++j) {
    bool all = true;
    for (auto i : family)
      if (!upper[i][j]) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

// Drops members (in order) while the intersection stays empty.
inline std::vector<std::size_t> prune_family(const std::vector<std::vector<char>>& upper,
                                             std::vector<std::size_t> family) {
  for (std::size_t k = 0; k < family.size();) {
    auto trial = family;
    trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
    if (!trial.empty() && !family_meets(upper, trial))
      family = std::move(trial);
    else
      ++k;
  }
  return family;
}

inline double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + t * ab);
}

inline PropertyReport check_contour_convexity(const Relation& rel, const GroundSet& ground,
                                              Property prop) {
  const auto which = prop == Property::convex_upper ? ContourKind::upper : ContourKind::strict_upper;
  const auto& pts = ground.points();
  const double half = ground.is_grid() && ground.resolution() > 0.0
                          ? 0.5 * ground.resolution() * (1.0 - 1e-9)
                          : kPointEqualityTol;
  const bool line_grid = ground.is_grid() && ground.dim() == 1;
  PropertyReport rep{prop};
  std::vector<char> member(pts.size());
  std::vector<std::size_t> inside, outside;
  for (const auto& x : pts) {
    inside.clear();
    outside.clear();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      member[j] = in_contour(rel, x, pts[j], which) ? 1 : 0;
      (member[j] ? inside : outside).push_back(j);
    }
    if (line_grid) {
      // On an ascending line grid the brute-force search below first fails
      // with a = the lowest member, p = the first non-member above it and
      // b = the first member above p.
      if (inside.empty()) continue;
      const std::size_t a = inside.front();
      auto p = std::find_if(outside.begin(), outside.end(), [a](std::size_t j) { return j > a; });
      if (p == outside.end()) continue;
      auto b = std::find_if(inside.begin(), inside.end(), [p](std::size_t j) { return j > *p; });
      if (b == inside.end()) continue;
      rep.holds = false;
      rep.witness = {x, pts[a], pts[*b], pts[*p]};
      return rep;
    }
    for (std::size_t ia = 0; ia < inside.size(); ++ia)
      for (std::size_t ib = ia + 1; ib < inside.size(); ++ib)
        for (auto p : outside) {
          const auto& a = pts[inside[ia]];
          const auto& b = pts[inside[ib]];
          if (segment_distance(pts[p], a, b) < half) {
            rep.holds = false;
            rep.witness = {x, a, b, pts[p]};
            return rep;
          }
        }
  }
  return rep;
}

}  // namespace detail

/// The ground points in the selected contour of x.
inline std::vector<Point> contour(const Relation& rel, const Point& x, const GroundSet& ground,
                                  ContourKind which) {
  require_dim(rel.dim(), x.dim());
  require_dim(rel.dim(), ground.dim());
  std::vector<Point> out;
  for (const auto& y : ground.points())
    if (detail::in_contour(rel, x, y, which)) out.push_back(y);
  return out;
}

/// Exhaustive check of a relation property over the ground set. Witness search
/// is first-found in ground (lexicographic) order. `m` is used by m-FIP only.
inline PropertyReport check_property(const Relation& rel, const GroundSet& ground, Property prop,
                                     std::size_t m = 2) {
  require_dim(rel.dim(), ground.dim());
  const auto& pts = ground.points();
  const std::size_t n = pts.size();
  PropertyReport rep{prop};
  switch (prop) {
    case Property::reflexive:
      for (const auto& x : pts)
        if (!rel.holds(x, x)) {
          rep.holds = false;
          rep.witness = {x};
          return rep;
        }
      return rep;
    case Property::complete:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
          if (!rel.holds(pts[i], pts[j]) && !rel.holds(pts[j], pts[i])) {
            rep.holds = false;
            rep.witness = {pts[i], pts[j]};
            return rep;
          }
      return rep;
    case Property::transitive: {
      // ge[i][j] == pts[i] >= pts[j]
      std::vector<std::vector<char>> ge(n, std::vector<char>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ge[i][j] = rel.holds(pts[i], pts[j]) ? 1 : 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          if (!ge[i][j]) continue;
          for (std::size_t k = 0; k < n; ++k)
            if (ge[j][k] && !ge[i][k]) {
              rep.holds = false;
              rep.witness = {pts[i], pts[j], pts[k]};
              return rep;
            }
        }
      return rep;
    }
    case Property::m_fip: {
      if (m == 0) throw InvalidArgument("m-FIP needs m >= 1");
      rep.m = m;
      const auto upper = detail::upper_table(rel, ground);
      // Families with repeats reduce to subsets; subsets of size min(m, n) dominate.
      const std::size_t k = std::min(m, n);
      std::vector<std::size_t> comb(k);
      for (std::size_t i = 0; i < k; ++i) comb[i] = i;
      while (true) {
        if (!detail::family_meets(upper, comb)) {
          rep.holds = false;
          for (auto i : detail::prune_family(upper, comb)) rep.witness.push_back(pts[i]);
          return rep;
        }
        std::size_t i = k;
        while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++comb[i - 1];
        for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
      }
      return rep;
    }
    case Property::fip: {
      // On a finite ground every subfamily of {U(x)} is finite, so FIP is
      // equivalent to the whole family meeting; intersect incrementally.
      const auto upper = detail::upper_table(rel, ground);
      std::vector<char> common(n, 1);
      std::vector<std::size_t> family;
      for (std::size_t i = 0; i < n; ++i) {
        family.push_back(i);
        bool any = false;
        for (std::size_t j = 0; j < n; ++j) {
          common[j] = common[j] && upper[i][j];
          any = any || common[j];
        }
        if (!any) {
          rep.holds = false;
          for (auto f : detail::prune_family(upper, family)) rep.witness.push_back(pts[f]);
          return rep;
        }
      }
      return rep;
    }
    case Property::convex_upper:
    case Property::convex_strict_upper:
      return detail::check_contour_convexity(rel, ground, prop);
    default:
      throw InvalidArgument("check_property: " + to_string(prop) + " is not a relation property");
  }
}

/// Ground points with no strictly better competitor. Competitors default to
/// the ground itself; a wider competitor set approximates maximality in the
/// ambient space rather than in the truncated ground.
inline std::vector<Point> maximal_elements(const Relation& rel, const GroundSet& ground,
                                           std::span<const Point> competitors) {
  require_dim(rel.dim(), ground.dim());
  std::vector<Point> out;
  for (const auto& x : ground.points()) {
    bool dominated = false;
    for (const auto& y : competitors)
      if (rel.strictly_prefers(y, x)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(x);
  }
  return out;
}

inline std::vector<Point> maximal_elements(const Relation& rel, const GroundSet& ground) {
  return maximal_elements(rel, ground, ground.points());
}

/// Ground points weakly preferred to every ground point.
inline std::vector<Point> maxima(const Relation& rel, const GroundSet& ground) {
  require_dim(rel.dim(), ground.dim());
  std::vector<Point> out;
  for (const auto& x : ground.points()) {
    bool all = true;
    for (const auto& y : ground.points())
      if (!rel.holds(x, y)) {
        all = false;
        break;
      }
    if (all) out.push_back(x);
  }
  return out;
}

}  // namespace maxel
