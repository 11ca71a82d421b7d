// problem.hpp - array descriptions and the bus they are streamed over
//
// A Problem is an m-bit bus plus a list of fixed-point arrays. Each array is
// treated as a preemptible task whose processing time is its size in bits;
// the bus lanes are the processors.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iris {

struct ArraySpec {
  std::string name;
  std::int64_t width = 1;     // element bitwidth W_j
  std::int64_t depth = 1;     // element count D_j
  std::int64_t due_date = 0;  // target completion cycle d_j (1-based)
  std::optional<std::int64_t> delta_cap;  // max elements per cycle

  bool operator==(const ArraySpec&) const = default;
};

struct Problem {
  std::int64_t bus_width = 0;
  int host_word = 64;
  std::vector<ArraySpec> arrays;

  bool operator==(const Problem&) const = default;
};

// Per-array quantities the scheduler works with.
struct DerivedTask {
  std::size_t index = 0;
  std::int64_t width = 0;
  std::int64_t processing_time = 0;  // W_j * D_j bits
  std::int64_t delta = 0;            // max bits per cycle
  std::int64_t release = 0;
  std::int64_t remaining_elements = 0;
};

/// Thrown when a Problem violates one or more invariants. Carries every
/// violation found, not just the first.
class ProblemError : public std::runtime_error {
 public:
  explicit ProblemError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Returns every invariant violation in `p`; empty means valid.
std::vector<std::string> validate_problem(const Problem& p);

/// Returns `p` unchanged, or throws ProblemError listing all violations.
const Problem& require_valid(const Problem& p);

/// Maximum bits array elements of width `w` may occupy in one cycle of an
/// m-bit bus: floor(m / w) * w, optionally limited to `cap` elements.
std::int64_t delta_of(std::int64_t w, std::int64_t m,
                      std::optional<std::int64_t> cap = std::nullopt);

/// Sum of W_j * D_j over all arrays.
std::int64_t total_processing_time(const Problem& p);

/// Elements array `a` may place in one cycle (delta / width).
std::int64_t elements_per_cycle(const ArraySpec& a, std::int64_t m);

std::vector<DerivedTask> derive_tasks(const Problem& p);

}  // namespace iris
