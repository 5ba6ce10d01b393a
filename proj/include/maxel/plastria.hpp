#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "maxel/cone.hpp"
#include "maxel/ground_set.hpp"
#include "maxel/point.hpp"
#include "maxel/properties.hpp"
#include "maxel/relation.hpp"

namespace maxel {

using GapFn = std::function<double(const Point&, const Point&)>;

/// Conditions tying a gap function f to a relation.
struct AssumptionFlags {
  bool sign_strict_upper = false;  // (a) f(x,y) < 0  <=>  y > x
  bool sign_strict_lower = false;  // (b) f(x,y) > 0  <=>  x > y
  bool lipschitz = false;          // (c) |f(x,y)| <= L ||x - y||
  bool order_compatible = false;   // (d) x > y  <=>  f(x,z) > f(y,z) for all / some z
  bool usc_first = false;          // (e) f(., y) upper semicontinuous

  bool all() const {
    return sign_strict_upper && sign_strict_lower && lipschitz && order_compatible && usc_first;
  }
};

/// Bivariate gap function f(x, y) whose sign encodes strict preference.
struct GapFunction {
  std::string name;
  GapFn eval;
  std::optional<double> lipschitz;
  AssumptionFlags flags;

  double operator()(const Point& x, const Point& y) const { return eval(x, y); }
};

/// f_u(x, y) = u(x) - u(y). L must be a Lipschitz bound of u.
inline GapFunction gap_from_utility(UtilityFn u, double L, std::string name = "f_u") {
  if (!(L > 0.0)) throw InvalidArgument("gap Lipschitz bound must be positive");
  GapFunction f;
  f.name = std::move(name);
  f.eval = [u = std::move(u)](const Point& x, const Point& y) { return u(x) - u(y); };
  f.lipschitz = L;
  f.flags = {true, true, true, true, true};
  return f;
}

/// f = 0, Lipschitz with any positive constant.
inline GapFunction zero_gap(double L = 1.0) {
  if (!(L > 0.0)) throw InvalidArgument("gap Lipschitz bound must be positive");
  return {"zero", [](const Point&, const Point&) { return 0.0; }, L, {true, true, true, true, true}};
}

using PointSampler = std::function<Point(std::mt19937_64&)>;

inline PointSampler uniform_box_sampler(std::size_t dim, double lo, double hi) {
  return [=](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(lo, hi);
    std::vector<double> c(dim);
    for (auto& v : c) v = U(rng);
    return Point(std::move(c));
  };
}

struct GapAudit {
  AssumptionFlags flags;              // declared flags after downgrades
  std::vector<std::string> warnings;  // one per downgraded flag
  std::vector<std::vector<Point>> witnesses;
};

/// Sampled self-audit of the declared flags (a)-(d) on random pairs. A flag
/// with a sampled violation is downgraded and a warning is recorded. Flag (e)
/// is not auditable by sampling and is kept as declared.
inline GapAudit audit_gap(const GapFunction& f, const Relation& rel, const PointSampler& sampler,
                          std::size_t pairs = 1000, std::uint64_t seed = 42) {
  GapAudit out{f.flags, {}, {}};
  std::mt19937_64 rng(seed);
  auto downgrade = [&](bool& flag, const std::string& what, std::vector<Point> w) {
    if (!flag) return;
    flag = false;
    std::string msg = f.name + ": " + what + " violated at";
    for (const auto& p : w) msg += " " + p.to_string();
    out.warnings.push_back(std::move(msg));
    out.witnesses.push_back(std::move(w));
  };
  for (std::size_t k = 0; k < pairs; ++k) {
    const Point x = sampler(rng);
    const Point y = sampler(rng);
    const double fxy = f(x, y);
    if ((fxy < 0.0) != rel.strictly_prefers(y, x)) downgrade(out.flags.sign_strict_upper, "(a)", {x, y});
    if ((fxy > 0.0) != rel.strictly_prefers(x, y)) downgrade(out.flags.sign_strict_lower, "(b)", {x, y});
    if (f.lipschitz) {
      if (std::abs(fxy) > *f.lipschitz * distance(x, y) * (1.0 + 1e-12) + 1e-15)
        downgrade(out.flags.lipschitz, "(c)", {x, y});
    } else {
      out.flags.lipschitz = false;
    }
    const bool strict = rel.strictly_prefers(x, y);
    for (int j = 0; j < 4; ++j) {
      const Point z = sampler(rng);
      const bool bigger = f(x, z) > f(y, z);
      if (bigger != strict) {
        downgrade(out.flags.order_compatible, "(d)", {x, y, z});
        break;
      }
    }
  }
  return out;
}

/// Copy of f carrying the audited flags.
inline GapFunction with_flags(GapFunction f, const AssumptionFlags& flags) {
  f.flags = flags;
  return f;
}

/// x* in N_f(x): <x*, y - x> <= f(x, y) + tol (1 + ||y - x||) for sampled y.
inline bool nf_membership(const GapFunction& f, const ContourSample& sample, const Point& xstar,
                          double tol = kDefaultConeTol) {
  require_dim(sample.base.dim(), xstar.dim());
  if (sample.empty_contour) return true;
  for (const auto& y : sample.points) {
    const Point d = y - sample.base;
    if (dot(xstar, d) > f(sample.base, y) + tol * (1.0 + norm(d))) return false;
  }
  return true;
}

/// L u*/||u*||, an element of N_f(x) whenever u* lies in N*(x).
inline Point nf_subgradient(const GapFunction& f, const Point& x, const Point& ustar) {
  require_dim(x.dim(), ustar.dim());
  if (!f.lipschitz) throw InvalidArgument("gap function has no Lipschitz bound");
  const double n = norm(ustar);
  if (n == 0.0) throw InvalidArgument("nf_subgradient needs a nonzero u*");
  return (*f.lipschitz / n) * ustar;
}

/// 0 in N_f(x) <=> x maximal, at every ground point. Skipped when f does not
/// carry flags (a) and (b).
inline PropertyReport zero_maximality_check(const GapFunction& f, const Relation& rel,
                                            const GroundSet& ground, double tol = kDefaultConeTol) {
  PropertyReport rep{Property::zero_maximality};
  if (!f.flags.sign_strict_upper || !f.flags.sign_strict_lower) {
    rep.holds = false;
    rep.skipped = true;
    rep.note = "precondition unmet: " + f.name + " lacks sign conditions (a)/(b)";
    return rep;
  }
  const auto me = maximal_elements(rel, ground);
  const Point origin = Point::zero(ground.dim());
  for (const auto& x : ground.points()) {
    const auto sample = sample_strict_contour(rel, x, ground.points());
    const bool zero_in = nf_membership(f, sample, origin, tol);
    if (zero_in != contains_point(me, x)) {
      rep.holds = false;
      rep.witness = {x};
      return rep;
    }
  }
  return rep;
}

}  // namespace maxel
