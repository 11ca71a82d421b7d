// scheduler.hpp - bus layout as preemptive multiprocessor scheduling
//
// Every bus bit lane is a processor and every array a task of W_j * D_j
// units that may run on up to delta_j lanes at once, in whole-element
// multiples of W_j. Due dates are turned into release times
// (r_j = d_max - d_j), the makespan problem is solved forward in time, and
// the resulting schedule is read backwards so that arrays with early due
// dates arrive first.
//
// The forward pass works interval by interval. In each interval the ready
// tasks are sorted by height (whole cycles still needed at full rate) and
// the tallest ones take the bus; when a tie group does not fit, the free
// lanes are shared out with a largest-remainder apportionment quantized to
// element widths. An interval ends at the next height crossing, the next
// completion or the next release.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "iris/layout.hpp"
#include "iris/problem.hpp"

namespace iris {

struct Allocation {
  std::uint32_t task = 0;
  std::int64_t bits = 0;  // beta_j, a multiple of the task's width

  bool operator==(const Allocation&) const = default;
};

struct Interval {
  std::int64_t start = 0;   // first forward cycle (0-based)
  std::int64_t length = 0;  // whole cycles
  std::vector<Allocation> allocation;  // bus order, lowest bits first
};

struct ForwardSchedule {
  std::vector<Interval> intervals;
  std::int64_t horizon = 0;
};

struct HeightState {
  std::vector<std::int64_t> remaining;  // E_j
  std::vector<std::int64_t> height;     // ceil(E_j * W_j / delta_j)
};

/// Task as seen by one allocation round.
struct ReadyTask {
  std::uint32_t id = 0;
  std::int64_t width = 0;
  std::int64_t cap = 0;     // usable bits this round, multiple of width
  std::int64_t height = 0;
};

/// r_j = max(d) - d_j. Throws std::invalid_argument on an empty list.
std::vector<std::int64_t> to_release_times(std::span<const std::int64_t> due_dates);

/// Whole cycles needed to move `remaining` elements at `delta` bits/cycle.
std::int64_t height_of(std::int64_t remaining, std::int64_t width,
                       std::int64_t delta);

HeightState initial_heights(std::span<const DerivedTask> tasks);

/// Largest-remainder split of `avail` bits among `tied`, in whole elements.
/// Result is parallel to `tied`. Requires sum of caps > avail > 0.
std::vector<std::int64_t> lrm_allocation(std::span<const ReadyTask> tied,
                                         std::int64_t avail);

/// Greedy allocation to the tallest tasks first. `ready` must be sorted by
/// nonincreasing height. Returns nonzero allocations in grant order.
std::vector<Allocation> find_capabilities(std::span<const ReadyTask> ready,
                                          std::int64_t bus_width);

/// Hands leftover lanes to ready tasks one element at a time, most
/// remaining work first, until nothing else fits. `remaining_bits` is
/// parallel to `ready`.
void backfill(std::vector<Allocation>& alloc, std::span<const ReadyTask> ready,
              std::span<const std::int64_t> remaining_bits,
              std::int64_t bus_width);

ForwardSchedule iris_schedule(const Problem& p);

Layout reverse_and_materialize(const ForwardSchedule& fs, const Problem& p);

/// iris_schedule followed by reverse_and_materialize.
Layout iris_layout(const Problem& p);

}  // namespace iris
