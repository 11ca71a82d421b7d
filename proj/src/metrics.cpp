#include "iris/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace iris {

std::string Efficiency::percent() const {
  if (capacity_bits == 0) return "0.0%";
  // tenths of a percent, rounded half-up
  const __int128 num = static_cast<__int128>(useful_bits) * 2000 + capacity_bits;
  const auto tenths = static_cast<std::int64_t>(num / (2 * static_cast<__int128>(capacity_bits)));
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
}

bool Efficiency::at_least(std::int64_t num, std::int64_t den) const {
  return static_cast<__int128>(useful_bits) * den >=
         static_cast<__int128>(num) * capacity_bits;
}

Efficiency bandwidth_efficiency(const Layout& layout, const Problem& p) {
  return {total_processing_time(p), layout.c_max() * p.bus_width};
}

Lateness completion_and_lateness(const Layout& layout, const Problem& p) {
  Lateness out;
  out.completion.assign(p.arrays.size(), 0);
  for (std::size_t c = 0; c < layout.cycles.size(); ++c)
    for (const auto& pl : layout.cycles[c])
      out.completion.at(pl.array) = static_cast<std::int64_t>(c) + 1;
  for (std::size_t j = 0; j < p.arrays.size(); ++j) {
    out.lateness.push_back(out.completion[j] - p.arrays[j].due_date);
    out.l_max = j == 0 ? out.lateness[j] : std::max(out.l_max, out.lateness[j]);
  }
  return out;
}

std::vector<std::int64_t> fifo_depths(const Layout& layout, const Problem& p) {
  const std::size_t n = p.arrays.size();
  // Arrival cycles per array, each list nondecreasing.
  std::vector<std::vector<std::int64_t>> arrivals(n);
  for (std::size_t c = 0; c < layout.cycles.size(); ++c)
    for (const auto& pl : layout.cycles[c])
      arrivals.at(pl.array).push_back(static_cast<std::int64_t>(c));

  std::vector<std::int64_t> depth(n, 0);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t j = 0; j < count; ++j) {
    const auto& arr = arrivals[j];
    std::int64_t backlog = 0, worst = 0;
    std::size_t k = 0;
    std::int64_t prev = -1;
    while (k < arr.size()) {
      const std::int64_t cycle = arr[k];
      std::int64_t a = 0;
      while (k < arr.size() && arr[k] == cycle) {
        ++a;
        ++k;
      }
      // idle cycles in between drain one element each
      if (prev >= 0) backlog = std::max<std::int64_t>(0, backlog - (cycle - prev - 1));
      backlog = std::max<std::int64_t>(0, backlog + a - 1);
      worst = std::max(worst, backlog);
      prev = cycle;
    }
    depth[j] = worst;
  }
  return depth;
}

std::vector<std::int64_t> fifo_depths_reference(const Layout& layout,
                                                const Problem& p) {
  const std::size_t n = p.arrays.size();
  std::vector<std::int64_t> backlog(n, 0), depth(n, 0);
  for (const auto& cycle : layout.cycles) {
    std::vector<std::int64_t> a(n, 0);
    for (const auto& pl : cycle) ++a.at(pl.array);
    for (std::size_t j = 0; j < n; ++j) {
      backlog[j] = std::max<std::int64_t>(0, backlog[j] + a[j] - 1);
      depth[j] = std::max(depth[j], backlog[j]);
    }
  }
  return depth;
}

MetricsReport compute_metrics(const Layout& layout, const Problem& p) {
  MetricsReport r;
  for (const auto& a : p.arrays) r.names.push_back(a.name);
  r.bus_width = p.bus_width;
  r.p_tot = total_processing_time(p);
  r.c_max = layout.c_max();
  r.b_eff = bandwidth_efficiency(layout, p);
  auto lat = completion_and_lateness(layout, p);
  r.completion = std::move(lat.completion);
  r.lateness = std::move(lat.lateness);
  r.l_max = lat.l_max;
  r.fifo_depth = fifo_depths(layout, p);
  r.wasted_bits = r.c_max * r.bus_width - r.p_tot;
  return r;
}

std::string metrics_json(const MetricsReport& r) {
  nlohmann::json j;
  j["bus_width"] = r.bus_width;
  j["p_tot"] = r.p_tot;
  j["c_max"] = r.c_max;
  j["b_eff"] = r.b_eff.value();
  j["b_eff_percent"] = r.b_eff.percent();
  j["l_max"] = r.l_max;
  j["wasted_bits"] = r.wasted_bits;
  nlohmann::json arrays = nlohmann::json::array();
  for (std::size_t k = 0; k < r.names.size(); ++k)
    arrays.push_back({{"name", r.names[k]},
                      {"completion", r.completion[k]},
                      {"lateness", r.lateness[k]},
                      {"fifo_depth", r.fifo_depth[k]}});
  j["arrays"] = std::move(arrays);
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::vector<std::string>> metric_rows(const MetricsColumns& columns) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"metric"};
  for (const auto& [label, _] : columns) header.push_back(label);
  rows.push_back(std::move(header));
  if (columns.empty()) return rows;

  auto add = [&](const std::string& name, auto&& get) {
    std::vector<std::string> row{name};
    for (const auto& [_, r] : columns) row.push_back(get(r));
    rows.push_back(std::move(row));
  };
  add("Efficiency", [](const MetricsReport& r) { return r.b_eff.percent(); });
  add("C_max", [](const MetricsReport& r) { return std::to_string(r.c_max); });
  add("L_max", [](const MetricsReport& r) { return std::to_string(r.l_max); });
  const auto& names = columns.front().second.names;
  for (std::size_t k = 0; k < names.size(); ++k)
    add("FIFO " + names[k], [k](const MetricsReport& r) {
      return k < r.fifo_depth.size() ? std::to_string(r.fifo_depth[k]) : std::string("-");
    });
  return rows;
}

}  // namespace

std::string metrics_table(const MetricsColumns& columns) {
  const auto rows = metric_rows(columns);
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c == 0)
        out << std::left << std::setw(static_cast<int>(width[c])) << rows[r][c];
      else
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << rows[r][c];
    }
    out << "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      out << std::string(total - 2, '-') << "\n";
    }
  }
  return out.str();
}

std::string metrics_csv(const MetricsColumns& columns) {
  std::ostringstream out;
  for (const auto& row : metric_rows(columns)) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  return out.str();
}

}  // namespace iris
