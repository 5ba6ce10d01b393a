#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "maxel/error.hpp"
#include "maxel/point.hpp"

namespace maxel {

/// Point not found in the ground of a tabular relation.
class NotInGround : public Error {
 public:
  explicit NotInGround(const Point& p)
      : Error("point " + p.to_string() + " is not in the tabular ground") {}
};

using PredicateRule = std::function<bool(const Point&, const Point&)>;
using UtilityFn = std::function<double(const Point&)>;

/// A binary relation "x is at least as good as y" on R^n.
///
/// Three representations are supported: a named closed-form predicate, a
/// utility-backed relation (x >= y iff u(x) >= u(y)), and a finite table over
/// an explicit list of points.
class Relation {
 public:
  struct Predicate {
    std::string name;
    PredicateRule rule;
  };
  struct Utility {
    std::string name;
    UtilityFn u;
    std::optional<double> lipschitz;
    bool quasiconcave = false;
  };
  struct Tabular {
    std::vector<Point> ground;
    std::vector<std::vector<bool>> matrix;  // matrix[i][j] == ground[i] >= ground[j]
  };

  static Relation predicate(std::string name, std::size_t dim, PredicateRule rule) {
    return Relation(dim, Predicate{std::move(name), std::move(rule)});
  }

  static Relation utility(std::string name, std::size_t dim, UtilityFn u,
                          std::optional<double> lipschitz = std::nullopt,
                          bool quasiconcave = false) {
    if (lipschitz && !(*lipschitz > 0.0))
      throw InvalidArgument("utility Lipschitz bound must be positive");
    return Relation(dim, Utility{std::move(name), std::move(u), lipschitz, quasiconcave});
  }

  static Relation tabular(std::vector<Point> ground, std::vector<std::vector<bool>> matrix) {
    if (ground.empty()) throw InvalidArgument("tabular relation needs a non-empty ground");
    if (matrix.size() != ground.size())
      throw InvalidArgument("tabular matrix must be square with side |ground|");
    for (const auto& row : matrix)
      if (row.size() != ground.size())
        throw InvalidArgument("tabular matrix must be square with side |ground|");
    const std::size_t dim = ground.front().dim();
    for (const auto& p : ground) require_dim(dim, p.dim());
    return Relation(dim, Tabular{std::move(ground), std::move(matrix)});
  }

  std::size_t dim() const { return dim_; }

  bool is_predicate() const { return std::holds_alternative<Predicate>(*kind_); }
  bool is_utility() const { return std::holds_alternative<Utility>(*kind_); }
  bool is_tabular() const { return std::holds_alternative<Tabular>(*kind_); }

  const Utility* utility_form() const { return std::get_if<Utility>(kind_.get()); }
  const Tabular* tabular_form() const { return std::get_if<Tabular>(kind_.get()); }

  std::string name() const {
    if (auto* p = std::get_if<Predicate>(kind_.get())) return p->name;
    if (auto* u = std::get_if<Utility>(kind_.get())) return u->name;
    return "tabular";
  }

  /// Truth of x >= y.
  bool holds(const Point& x, const Point& y) const {
    require_dim(dim_, x.dim());
    require_dim(dim_, y.dim());
    return std::visit(
        [&](const auto& k) -> bool {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Predicate>) {
            return k.rule(x, y);
          } else if constexpr (std::is_same_v<K, Utility>) {
            return k.u(x) >= k.u(y);
          } else {
            return k.matrix[index_of(k, x)][index_of(k, y)];
          }
        },
        *kind_);
  }

  /// Truth of y > x, the asymmetric part: y >= x and not x >= y.
  bool strictly_prefers(const Point& y, const Point& x) const {
    return holds(y, x) && !holds(x, y);
  }

 private:
  using Kind = std::variant<Predicate, Utility, Tabular>;

  Relation(std::size_t dim, Kind kind)
      : dim_(dim), kind_(std::make_shared<const Kind>(std::move(kind))) {
    if (dim_ == 0) throw InvalidArgument("relation dimension must be >= 1");
  }

  static std::size_t index_of(const Tabular& t, const Point& p) {
    for (std::size_t i = 0; i < t.ground.size(); ++i)
      if (t.ground[i] == p) return i;
    throw NotInGround(p);
  }

  std::size_t dim_;
  std::shared_ptr<const Kind> kind_;
};

}  // namespace maxel
