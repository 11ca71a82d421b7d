#include "iris/sweep.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "iris/baselines.hpp"
#include "iris/bitsim.hpp"
#include "iris/random_problem.hpp"
#include "iris/scheduler.hpp"

namespace iris {

Strategy parse_strategy(const std::string& name) {
  if (name == "iris") return Strategy::iris;
  if (name == "naive") return Strategy::naive;
  if (name == "packed") return Strategy::packed;
  throw std::invalid_argument("unknown strategy '" + name + "' (iris, naive, packed)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::iris: return "iris";
    case Strategy::naive: return "naive";
    case Strategy::packed: return "packed";
  }
  return "?";
}

Layout run_strategy(Strategy s, const Problem& p) {
  switch (s) {
    case Strategy::naive: return naive_layout(p);
    case Strategy::packed: return packed_layout(p);
    case Strategy::iris: break;
  }
  return iris_layout(p);
}

Problem with_delta_cap(Problem p, std::int64_t cap) {
  for (auto& a : p.arrays) a.delta_cap = cap;
  return p;
}

Problem with_widths(Problem p, const std::vector<std::int64_t>& widths) {
  if (widths.size() != p.arrays.size())
    throw std::invalid_argument("width tuple has " + std::to_string(widths.size()) +
                                " entries for " + std::to_string(p.arrays.size()) + " arrays");
  for (std::size_t j = 0; j < widths.size(); ++j) p.arrays[j].width = widths[j];
  return p;
}

std::vector<SweepPoint> sweep_points(const Problem& base,
                                     const std::vector<std::int64_t>& caps,
                                     const std::vector<std::vector<std::int64_t>>& widths) {
  if (caps.empty() && widths.empty())
    throw std::invalid_argument("sweep needs at least one axis");
  std::vector<std::optional<std::int64_t>> cap_axis(caps.begin(), caps.end());
  if (cap_axis.empty()) cap_axis.push_back(std::nullopt);
  std::vector<std::vector<std::int64_t>> width_axis = widths;
  if (width_axis.empty()) width_axis.push_back({});

  std::vector<SweepPoint> points;
  for (const auto& w : width_axis)
    for (const auto& c : cap_axis) {
      SweepPoint sp;
      sp.delta_cap = c;
      sp.widths = w;
      sp.problem = base;
      if (!w.empty()) sp.problem = with_widths(sp.problem, w);
      if (c) sp.problem = with_delta_cap(sp.problem, *c);
      points.push_back(std::move(sp));
    }
  return points;
}

std::vector<SweepPoint> random_sweep_points(std::uint64_t seed, std::int64_t count) {
  if (count < 1) throw std::invalid_argument("random sweep needs at least one point");
  std::vector<SweepPoint> points;
  for (std::int64_t k = 0; k < count; ++k) {
    SweepPoint sp;
    sp.seed = seed + static_cast<std::uint64_t>(k);
    sp.problem = random_problem(*sp.seed);
    points.push_back(std::move(sp));
  }
  return points;
}

namespace {

SweepRow evaluate_point(std::size_t index, const SweepPoint& sp, Strategy s) {
  SweepRow row;
  row.point = index;
  row.spec = sp;
  row.strategy = s;
  try {
    const Layout layout = run_strategy(s, sp.problem);
    row.audit_ok = audit_layout(layout, sp.problem).ok();
    row.metrics = compute_metrics(layout, sp.problem);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::string join(const std::vector<std::int64_t>& v, const char* sep) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? sep : "") + std::to_string(v[k]);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::vector<SweepRow> evaluate_sweep(const std::vector<SweepPoint>& points, Strategy s) {
  std::vector<SweepRow> rows(points.size());
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < n; ++k)
    rows[k] = evaluate_point(static_cast<std::size_t>(k), points[k], s);
  return rows;
}

std::vector<SweepRow> evaluate_sweep_serial(const std::vector<SweepPoint>& points, Strategy s) {
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < points.size(); ++k) rows.push_back(evaluate_point(k, points[k], s));
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "point,seed,strategy,delta_cap,widths,bus_width,arrays,c_max,b_eff,b_eff_percent,"
         "l_max,wasted_bits,fifo_max,fifo_total,fifo_depths,audit,error\n";
  for (const auto& r : rows) {
    out << r.point << "," << (r.spec.seed ? std::to_string(*r.spec.seed) : "") << ","
        << to_string(r.strategy) << ","
        << (r.spec.delta_cap ? std::to_string(*r.spec.delta_cap) : "") << ","
        << join(r.spec.widths, "x") << "," << r.spec.problem.bus_width << ","
        << r.spec.problem.arrays.size() << ",";
    if (r.metrics) {
      const auto& m = *r.metrics;
      std::string depths;
      for (std::size_t j = 0; j < m.names.size(); ++j)
        depths += (j ? ";" : "") + m.names[j] + "=" + std::to_string(m.fifo_depth[j]);
      const auto fmax = m.fifo_depth.empty()
                            ? 0
                            : *std::max_element(m.fifo_depth.begin(), m.fifo_depth.end());
      const auto ftot = std::accumulate(m.fifo_depth.begin(), m.fifo_depth.end(), std::int64_t{0});
      out << m.c_max << "," << std::fixed << std::setprecision(6) << m.b_eff.value() << ","
          << m.b_eff.percent() << "," << m.l_max << "," << m.wasted_bits << "," << fmax << ","
          << ftot << "," << csv_field(depths) << "," << (r.audit_ok ? "pass" : "fail") << ",";
    } else {
      out << ",,,,,,,,,fail,";
    }
    out << csv_field(r.error) << "\n";
  }
  return out.str();
}

}  // namespace iris
