#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

#include "maxel/descent.hpp"

namespace maxel {

enum class TraceFormat { csv, json };

inline TraceFormat trace_format_for(const std::filesystem::path& path) {
  return path.extension() == ".json" ? TraceFormat::json : TraceFormat::csv;
}

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string join_coords(const Point& p) {
  std::string s;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) s += ';';
    s += fmt_double(p[i]);
  }
  return s;
}

inline std::string opt_cell(const std::optional<double>& v) { return v ? fmt_double(*v) : std::string(); }

inline nlohmann::json point_json(const Point& p) { return std::vector<double>(p.coords().begin(), p.coords().end()); }

inline Point point_from_json(const nlohmann::json& j) { return Point(j.get<std::vector<double>>()); }

}  // namespace detail

/// CSV columns: k, x, xstar, theta, dist_to_ref, gap_to_ref, fejer_residual.
/// Coordinates are joined by ';'; absent values are empty cells.
inline std::string trace_to_csv(const DescentTrace& trace) {
  std::string out = "k,x,xstar,theta,dist_to_ref,gap_to_ref,fejer_residual\n";
  for (const auto& r : trace.records) {
    out += std::to_string(r.k) + ',' + detail::join_coords(r.x) + ',' +
           (r.xstar ? detail::join_coords(*r.xstar) : std::string()) + ',' + detail::opt_cell(r.theta) + ',' +
           detail::opt_cell(r.dist) + ',' + detail::opt_cell(r.gap) + ',' + detail::opt_cell(r.fejer) + '\n';
  }
  return out;
}

inline nlohmann::json trace_to_json(const DescentTrace& trace) {
  nlohmann::json j;
  j["schema"] = 1;
  j["termination"] = to_string(trace.termination);
  j["lipschitz"] = trace.lipschitz;
  j["reference"] = trace.reference ? detail::point_json(*trace.reference) : nlohmann::json(nullptr);
  auto& rows = j["records"] = nlohmann::json::array();
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const auto& r : trace.records) {
    rows.push_back({{"k", r.k},
                    {"x", detail::point_json(r.x)},
                    {"xstar", r.xstar ? detail::point_json(*r.xstar) : nlohmann::json(nullptr)},
                    {"theta", opt(r.theta)},
                    {"dist_to_ref", opt(r.dist)},
                    {"gap_to_ref", opt(r.gap)},
                    {"fejer_residual", opt(r.fejer)}});
  }
  return j;
}

inline DescentTrace trace_from_json(const nlohmann::json& j) {
  DescentTrace t;
  const auto term = j.at("termination").get<std::string>();
  for (auto k : {Termination::zero_subgradient, Termination::max_iters, Termination::norm_below_eps})
    if (to_string(k) == term) t.termination = k;
  t.lipschitz = j.at("lipschitz").get<double>();
  if (!j.at("reference").is_null()) t.reference = detail::point_from_json(j.at("reference"));
  auto opt = [](const nlohmann::json& v) { return v.is_null() ? std::optional<double>() : v.get<double>(); };
  for (const auto& row : j.at("records")) {
    IterateRecord r;
    r.k = row.at("k").get<std::size_t>();
    r.x = detail::point_from_json(row.at("x"));
    if (!row.at("xstar").is_null()) r.xstar = detail::point_from_json(row.at("xstar"));
    r.theta = opt(row.at("theta"));
    r.dist = opt(row.at("dist_to_ref"));
    r.gap = opt(row.at("gap_to_ref"));
    r.fejer = opt(row.at("fejer_residual"));
    t.records.push_back(std::move(r));
  }
  return t;
}

/// Writes through a temporary file in the same directory and renames it into
/// place.
inline std::filesystem::path write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + path.string());
    os << content;
    os.flush();
    if (!os) throw Error("cannot write " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot write " + path.string());
  }
  return path;
}

inline std::filesystem::path emit_trace(const DescentTrace& trace, TraceFormat format,
                                        const std::filesystem::path& path) {
  return write_atomic(path, format == TraceFormat::csv ? trace_to_csv(trace) : trace_to_json(trace).dump(2) + "\n");
}

}  // namespace maxel
