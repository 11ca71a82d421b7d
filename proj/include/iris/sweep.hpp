// sweep.hpp - strategy dispatch and design-space sweeps
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iris/layout.hpp"
#include "iris/metrics.hpp"
#include "iris/problem.hpp"

namespace iris {

enum class Strategy { iris, naive, packed };

Strategy parse_strategy(const std::string& name);
std::string to_string(Strategy s);
Layout run_strategy(Strategy s, const Problem& p);

/// Problem with every array's delta_cap set to `cap`.
Problem with_delta_cap(Problem p, std::int64_t cap);
/// Problem with array widths replaced in order; sizes must match.
Problem with_widths(Problem p, const std::vector<std::int64_t>& widths);

struct SweepPoint {
  std::optional<std::int64_t> delta_cap;
  std::vector<std::int64_t> widths;  // empty: problem's own widths
  std::optional<std::uint64_t> seed;  // set for random instances
  Problem problem;
};

/// Cartesian product of the cap and width axes over `base`. An empty axis
/// contributes the base value. Throws std::invalid_argument if both are empty.
std::vector<SweepPoint> sweep_points(const Problem& base,
                                     const std::vector<std::int64_t>& caps,
                                     const std::vector<std::vector<std::int64_t>>& widths);

/// `count` random instances with seeds seed, seed+1, ...
std::vector<SweepPoint> random_sweep_points(std::uint64_t seed, std::int64_t count);

struct SweepRow {
  std::size_t point = 0;
  SweepPoint spec;
  Strategy strategy = Strategy::iris;
  std::optional<MetricsReport> metrics;
  bool audit_ok = false;
  std::string error;  // set when the point could not be evaluated
};

/// Evaluates every point independently in parallel. Rows come back in
/// point order.
std::vector<SweepRow> evaluate_sweep(const std::vector<SweepPoint>& points, Strategy s);
/// Same, one point at a time.
std::vector<SweepRow> evaluate_sweep_serial(const std::vector<SweepPoint>& points, Strategy s);

/// Columns: point,seed,strategy,delta_cap,widths,bus_width,arrays,c_max,
/// b_eff,b_eff_percent,l_max,wasted_bits,fifo_max,fifo_total,fifo_depths,
/// audit,error
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace iris
