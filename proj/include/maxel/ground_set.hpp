#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "maxel/error.hpp"
#include "maxel/point.hpp"

namespace maxel {

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;

  std::size_t count() const {
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  }
};

/// A finite, non-empty stand-in for a subset X of R^n.
///
/// Grid ground sets expand to the lattice {lo + i*step} per axis, enumerated
/// with the first axis outermost; that is the "ground order" every sweep uses.
class GroundSet {
 public:
  static GroundSet grid(std::vector<AxisRange> axes) {
    if (axes.empty()) throw InvalidArgument("grid needs at least one axis");
    for (const auto& a : axes) {
      if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !std::isfinite(a.step))
        throw InvalidArgument("grid bounds must be finite");
      if (!(a.step > 0.0)) throw InvalidArgument("grid step must be positive");
      if (a.hi < a.lo) throw InvalidArgument("grid upper bound below lower bound");
    }
    GroundSet g;
    g.axes_ = std::move(axes);
    g.expand();
    return g;
  }

  static GroundSet grid1d(double lo, double hi, double step) {
    return grid({AxisRange{lo, hi, step}});
  }

  static GroundSet explicit_points(std::vector<Point> points) {
    if (points.empty()) throw InvalidArgument("ground set must be non-empty");
    const std::size_t dim = points.front().dim();
    for (std::size_t i = 0; i < points.size(); ++i) {
      require_dim(dim, points[i].dim());
      for (std::size_t j = 0; j < i; ++j)
        if (points[i] == points[j]) throw InvalidArgument("ground points must be distinct");
    }
    GroundSet g;
    g.points_ = std::move(points);
    return g;
  }

  /// Parses "lo:hi:step[,lo:hi:step...]", one clause per dimension.
  static GroundSet parse(std::string_view spec) {
    std::vector<AxisRange> axes;
    std::size_t start = 0;
    while (start <= spec.size()) {
      auto comma = spec.find(',', start);
      auto clause = spec.substr(start, comma == std::string_view::npos ? spec.npos : comma - start);
      double parts[3];
      std::size_t pos = 0;
      for (int i = 0; i < 3; ++i) {
        auto colon = clause.find(':', pos);
        if ((i < 2) == (colon == std::string_view::npos))
          throw InvalidArgument("bad grid clause '" + std::string(clause) + "', want lo:hi:step");
        auto tok = clause.substr(pos, i < 2 ? colon - pos : clause.npos);
        parts[i] = parse_double(tok);
        pos = colon + 1;
      }
      axes.push_back({parts[0], parts[1], parts[2]});
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return grid(std::move(axes));
  }

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return points_.front().dim(); }
  bool is_grid() const { return !axes_.empty(); }
  const std::vector<AxisRange>& axes() const { return axes_; }

  /// Smallest grid step, or 0 for explicit lists.
  double resolution() const {
    double r = 0.0;
    for (const auto& a : axes_)
      if (a.count() > 1 && (r == 0.0 || a.step < r)) r = a.step;
    return r;
  }

  bool contains(const Point& p) const { return contains_point(points_, p); }

 private:
  static double parse_double(std::string_view tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw InvalidArgument("bad number '" + std::string(tok) + "' in grid spec");
    return v;
  }

  void expand() {
    std::vector<std::size_t> counts;
    std::size_t total = 1;
    for (const auto& a : axes_) {
      counts.push_back(a.count());
      total *= counts.back();
    }
    points_.reserve(total);
    std::vector<std::size_t> idx(axes_.size(), 0);
    std::vector<double> c(axes_.size());
    for (std::size_t n = 0; n < total; ++n) {
      for (std::size_t d = 0; d < axes_.size(); ++d)
        c[d] = axes_[d].lo + static_cast<double>(idx[d]) * axes_[d].step;
      points_.emplace_back(c);
      for (std::size_t d = axes_.size(); d-- > 0;) {
        if (++idx[d] < counts[d]) break;
        idx[d] = 0;
      }
    }
  }

  std::vector<AxisRange> axes_;
  std::vector<Point> points_;
};

}  // namespace maxel
