#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "maxel/error.hpp"

namespace maxel {

/// Coordinate-wise tolerance used for point identity on generated grids.
inline constexpr double kPointEqualityTol = 1e-12;

/// A finite vector of R^n, n >= 1.
class Point {
 public:
  Point() = default;

  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    validate();
  }

  Point(std::initializer_list<double> coords) : coords_(coords) { validate(); }

  static Point zero(std::size_t dim) {
    if (dim == 0) throw InvalidArgument("point dimension must be >= 1");
    return Point(std::vector<double>(dim, 0.0));
  }

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  friend Point operator+(const Point& a, const Point& b) {
    require_dim(a.dim(), b.dim());
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
    return Point(std::move(out));
  }

  friend Point operator-(const Point& a, const Point& b) {
    require_dim(a.dim(), b.dim());
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
    return Point(std::move(out));
  }

  friend Point operator*(double s, const Point& a) {
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = s * a[i];
    return Point(std::move(out));
  }

  friend Point operator-(const Point& a) { return -1.0 * a; }

  /// Coordinate-wise equality within kPointEqualityTol.
  friend bool operator==(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (std::abs(a[i] - b[i]) > kPointEqualityTol) return false;
    return true;
  }

  /// Strict lexicographic order on raw coordinates.
  friend bool lex_less(const Point& a, const Point& b) {
    for (std::size_t i = 0; i < std::min(a.dim(), b.dim()); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return a.dim() < b.dim();
  }

  std::string to_string() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (std::size_t i = 0; i < p.dim(); ++i) {
      if (i) os << ", ";
      os << p[i];
    }
    return os << ')';
  }

 private:
  void validate() const {
    if (coords_.empty()) throw InvalidArgument("point dimension must be >= 1");
    for (double c : coords_)
      if (!std::isfinite(c)) throw InvalidArgument("point coordinate is not finite");
  }

  std::vector<double> coords_;
};

inline double dot(const Point& a, const Point& b) {
  require_dim(a.dim(), b.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }

inline double distance(const Point& a, const Point& b) { return norm(a - b); }

inline bool is_zero(const Point& a, double tol = 0.0) { return norm(a) <= tol; }

inline bool contains_point(std::span<const Point> set, const Point& p) {
  for (const auto& q : set)
    if (q == p) return true;
  return false;
}

/// Symmetric difference is empty under point tolerance.
inline bool same_point_set(std::span<const Point> a, std::span<const Point> b) {
  for (const auto& p : a)
    if (!contains_point(b, p)) return false;
  for (const auto& p : b)
    if (!contains_point(a, p)) return false;
  return true;
}

inline bool is_subset(std::span<const Point> sub, std::span<const Point> super) {
  for (const auto& p : sub)
    if (!contains_point(super, p)) return false;
  return true;
}

}  // namespace maxel
