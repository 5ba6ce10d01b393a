#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "maxel/plastria.hpp"
#include "maxel/point.hpp"

namespace maxel {

/// Rejected step-size rule.
class ScheduleError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Oracle norm exceeded the declared bound L.
class OracleNormError : public Error {
 public:
  using Error::Error;
};

/// Step sizes theta_k, k >= 1.
class StepSchedule {
 public:
  enum class Kind { harmonic, power, constant, list };

  /// theta_k = theta0 / k
  static StepSchedule harmonic(double theta0 = 1.0) { return {Kind::harmonic, theta0, 1.0, {}}; }
  /// theta_k = theta0 / k^p
  static StepSchedule power(double theta0, double p) { return {Kind::power, theta0, p, {}}; }
  /// theta_k = c; never valid, kept so the validator can reject it by rule.
  static StepSchedule constant(double c) { return {Kind::constant, c, 0.0, {}}; }
  static StepSchedule list(std::vector<double> values) { return {Kind::list, 0.0, 0.0, std::move(values)}; }

  Kind kind() const { return kind_; }
  double theta0() const { return theta0_; }
  double exponent() const { return exponent_; }
  const std::vector<double>& values() const { return values_; }

  double theta(std::size_t k) const {
    const auto kd = static_cast<double>(k);
    switch (kind_) {
      case Kind::harmonic: return theta0_ / kd;
      case Kind::power: return theta0_ / std::pow(kd, exponent_);
      case Kind::constant: return theta0_;
      case Kind::list: return values_.at(k - 1);
    }
    return 0.0;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::harmonic: return "harmonic(" + std::to_string(theta0_) + ")";
      case Kind::power: return "power(" + std::to_string(theta0_) + "," + std::to_string(exponent_) + ")";
      case Kind::constant: return "constant(" + std::to_string(theta0_) + ")";
      case Kind::list: return "list[" + std::to_string(values_.size()) + "]";
    }
    return "?";
  }

 private:
  StepSchedule(Kind k, double t0, double p, std::vector<double> v)
      : kind_(k), theta0_(t0), exponent_(p), values_(std::move(v)) {}

  Kind kind_;
  double theta0_;
  double exponent_;
  std::vector<double> values_;
};

/// Rejects rules whose steps are not positive, do not sum to infinity, or
/// whose squares do not sum finitely; checks the partial-sum bound over the
/// horizon for harmonic rules.
inline void validate_schedule(const StepSchedule& s, std::size_t horizon) {
  switch (s.kind()) {
    case StepSchedule::Kind::constant:
      throw ScheduleError("constant step " + s.describe() + ": sum of squared steps diverges");
    case StepSchedule::Kind::power:
      if (!(s.exponent() > 0.5 && s.exponent() <= 1.0))
        throw ScheduleError(s.describe() + ": need 1/2 < p <= 1");
      [[fallthrough]];
    case StepSchedule::Kind::harmonic:
      if (!(s.theta0() > 0.0) || !std::isfinite(s.theta0()))
        throw ScheduleError(s.describe() + ": theta0 must be positive");
      break;
    case StepSchedule::Kind::list:
      if (s.values().size() < horizon)
        throw ScheduleError("explicit schedule shorter than the iteration horizon");
      for (double v : s.values())
        if (!(v > 0.0) || !std::isfinite(v)) throw ScheduleError("explicit steps must be positive");
      return;
  }
  if (s.kind() == StepSchedule::Kind::harmonic) {
    const double cap = s.theta0() * s.theta0() * std::numbers::pi * std::numbers::pi / 6.0 + 1e-9;
    double sq = 0.0;
    for (std::size_t k = 1; k <= horizon; ++k) {
      const double t = s.theta(k);
      sq += t * t;
    }
    if (sq > cap) throw ScheduleError("harmonic squared partial sum exceeds theta0^2 pi^2/6");
  }
}

struct DescentConfig {
  std::size_t max_iters = 10000;
  double stop_norm = 0.0;  // 0: stop only on an exact zero subgradient
  double lipschitz = 1.0;
};

enum class Termination { zero_subgradient, max_iters, norm_below_eps };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::zero_subgradient: return "zeroSubgradient";
    case Termination::max_iters: return "maxIters";
    case Termination::norm_below_eps: return "normBelowEps";
  }
  return "?";
}

/// One row of a descent trace. Rows with a step carry x_k*, theta_k and the
/// Fejér residual; the last row may carry only x (or x and a stopping x*).
struct IterateRecord {
  std::size_t k = 1;
  Point x;
  std::optional<Point> xstar;
  std::optional<double> theta;
  std::optional<double> dist;    // ||x_k - ref||
  std::optional<double> gap;     // f(x_k, ref)
  std::optional<double> fejer;   // dist_{k+1}^2 - dist_k^2 - theta_k^2 L^2
};

struct DescentTrace {
  std::vector<IterateRecord> records;
  Termination termination = Termination::max_iters;
  double lipschitz = 1.0;
  std::optional<Point> reference;

  std::size_t steps() const {
    std::size_t n = 0;
    for (const auto& r : records)
      if (r.theta) ++n;
    return n;
  }
  const Point& final_point() const { return records.back().x; }
};

using SubgradientOracle = std::function<Point(const Point&)>;

/// x_{k+1} = x_k - theta_k x_k*, with x_k* from the oracle (an element of
/// N_f(x_k) of norm at most L, or 0 at a maximal element).
inline DescentTrace run_descent(const SubgradientOracle& oracle, const Point& x1, const StepSchedule& schedule,
                                const DescentConfig& config, const std::optional<Point>& reference = std::nullopt,
                                const GapFunction* f = nullptr) {
  if (config.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (!(config.lipschitz > 0.0)) throw InvalidArgument("descent needs L > 0");
  if (config.stop_norm < 0.0) throw InvalidArgument("stop norm must be nonnegative");
  if (reference) require_dim(x1.dim(), reference->dim());
  validate_schedule(schedule, config.max_iters);

  DescentTrace trace;
  trace.lipschitz = config.lipschitz;
  trace.reference = reference;
  const double L = config.lipschitz;

  auto annotate = [&](IterateRecord& r) {
    if (!reference) return;
    r.dist = distance(r.x, *reference);
    if (f) r.gap = (*f)(r.x, *reference);
  };

  Point x = x1;
  trace.termination = Termination::max_iters;
  for (std::size_t k = 1;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.x = x;
    annotate(rec);
    if (k > config.max_iters) {
      trace.records.push_back(std::move(rec));
      break;
    }
    Point xs = oracle(x);
    require_dim(x.dim(), xs.dim());
    const double nxs = norm(xs);
    if (nxs > L * (1.0 + 1e-12))
      throw OracleNormError("oracle returned ||x*|| = " + std::to_string(nxs) + " > L = " + std::to_string(L) +
                            " at iteration " + std::to_string(k));
    if (nxs == 0.0 || nxs <= config.stop_norm) {
      trace.termination = nxs == 0.0 ? Termination::zero_subgradient : Termination::norm_below_eps;
      rec.xstar = std::move(xs);
      trace.records.push_back(std::move(rec));
      break;
    }
    const double theta = schedule.theta(k);
    Point next = x - theta * xs;
    rec.xstar = std::move(xs);
    rec.theta = theta;
    if (reference) {
      const double d1 = distance(next, *reference);
      rec.fejer = d1 * d1 - *rec.dist * *rec.dist - theta * theta * L * L;
    }
    trace.records.push_back(std::move(rec));
    x = std::move(next);
  }
  return trace;
}

/// ||x_{k+1} - ref||^2 <= ||x_k - ref||^2 + theta_k^2 L^2 (+ 1e-10 relative slack)
/// at every step of the trace.
inline bool quasi_fejer_check(const DescentTrace& trace, const Point& reference, double L) {
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (!r.theta) continue;
    const double d0 = distance(r.x, reference);
    const double d1 = distance(trace.records[i + 1].x, reference);
    const double budget = (*r.theta) * (*r.theta) * L * L;
    if (d1 * d1 > d0 * d0 + budget + 1e-10 * (1.0 + d0 * d0)) return false;
  }
  return true;
}

/// Largest relative error of x_{k+1} = x_k - theta_k x_k* along the trace.
inline double reconstruction_residual(const DescentTrace& trace) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (!r.theta) continue;
    const Point predicted = r.x - (*r.theta) * (*r.xstar);
    worst = std::max(worst, distance(predicted, trace.records[i + 1].x) / (1.0 + norm(r.x)));
  }
  return worst;
}

struct GapConvergence {
  double value = 0.0;      // max |f(x_k, ref)| over the window
  std::size_t window = 0;  // number of trailing iterates inspected
  bool converged = false;  // value <= threshold
};

/// max |f(x_k, ref)| over the last 5% of the iterates (at least one).
inline GapConvergence gap_convergence_stat(const DescentTrace& trace, const GapFunction& f, const Point& reference,
                                           double threshold = 0.02) {
  if (trace.records.empty()) throw InvalidArgument("gap statistic of an empty trace");
  const std::size_t n = trace.records.size();
  const std::size_t window = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.05 * static_cast<double>(n))));
  GapConvergence g;
  g.window = window;
  for (std::size_t i = n - window; i < n; ++i) g.value = std::max(g.value, std::abs(f(trace.records[i].x, reference)));
  g.converged = g.value <= threshold;
  return g;
}

}  // namespace maxel
