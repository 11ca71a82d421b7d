// metrics.hpp - layout quality: efficiency, lateness, decoder FIFO depths
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iris/layout.hpp"
#include "iris/problem.hpp"

namespace iris {

/// Exact p_tot / (c_max * m).
struct Efficiency {
  std::int64_t useful_bits = 0;
  std::int64_t capacity_bits = 0;

  double value() const {
    return capacity_bits ? static_cast<double>(useful_bits) / capacity_bits : 0.0;
  }
  /// Percentage rounded half-up to one decimal, e.g. "45.4%".
  std::string percent() const;
  /// True when the exact ratio is >= num/den.
  bool at_least(std::int64_t num, std::int64_t den) const;
};

struct Lateness {
  std::vector<std::int64_t> completion;  // C_j
  std::vector<std::int64_t> lateness;    // L_j = C_j - d_j, may be negative
  std::int64_t l_max = 0;
};

struct MetricsReport {
  std::vector<std::string> names;
  std::int64_t bus_width = 0;
  std::int64_t p_tot = 0;
  std::int64_t c_max = 0;
  Efficiency b_eff;
  std::vector<std::int64_t> completion;
  std::vector<std::int64_t> lateness;
  std::int64_t l_max = 0;
  std::vector<std::int64_t> fifo_depth;
  std::int64_t wasted_bits = 0;
};

Efficiency bandwidth_efficiency(const Layout& layout, const Problem& p);

Lateness completion_and_lateness(const Layout& layout, const Problem& p);

/// Worst decoder backlog per array when each array's stream drains one
/// element per cycle: b(t) = max(0, b(t-1) + a(t) - 1), depth = max b(t).
/// Arrays are processed in parallel.
std::vector<std::int64_t> fifo_depths(const Layout& layout, const Problem& p);

/// Dense cycle-by-cycle evaluation of the same recurrence; kept as the
/// reference for the parallel kernel.
std::vector<std::int64_t> fifo_depths_reference(const Layout& layout,
                                                const Problem& p);

MetricsReport compute_metrics(const Layout& layout, const Problem& p);

std::string metrics_json(const MetricsReport& r);

/// Labelled metrics columns rendered side by side, one row per metric:
/// Efficiency, C_max, L_max, then one FIFO depth row per array.
using MetricsColumns = std::vector<std::pair<std::string, MetricsReport>>;
std::string metrics_table(const MetricsColumns& columns);
std::string metrics_csv(const MetricsColumns& columns);

}  // namespace iris
