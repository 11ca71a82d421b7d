#include "iris/problem.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace iris {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += "; ";
    out += l;
  }
  return out;
}

}  // namespace

ProblemError::ProblemError(std::vector<std::string> violations)
    : std::runtime_error("invalid problem: " + join_lines(violations)),
      violations_(std::move(violations)) {}

std::vector<std::string> validate_problem(const Problem& p) {
  std::vector<std::string> errs;
  if (p.bus_width < 1) errs.push_back("bus_width must be >= 1");
  if (p.host_word != 8 && p.host_word != 16 && p.host_word != 32 &&
      p.host_word != 64)
    errs.push_back("host_word must be one of 8, 16, 32, 64");
  if (p.arrays.empty()) errs.push_back("problem has no arrays");

  std::set<std::string> seen;
  for (const auto& a : p.arrays) {
    const std::string tag = "array '" + a.name + "': ";
    if (a.name.empty()) errs.push_back("array with empty name");
    if (!seen.insert(a.name).second) errs.push_back(tag + "duplicate name");
    if (a.width < 1) errs.push_back(tag + "width must be >= 1");
    if (p.bus_width >= 1 && a.width > p.bus_width)
      errs.push_back(tag + "array wider than bus");
    if (a.depth < 1) errs.push_back(tag + "empty array");
    if (a.due_date < 0) errs.push_back(tag + "due_date must be >= 0");
    if (a.delta_cap && *a.delta_cap < 1)
      errs.push_back(tag + "delta_cap must be >= 1");
  }
  return errs;
}

const Problem& require_valid(const Problem& p) {
  auto errs = validate_problem(p);
  if (!errs.empty()) throw ProblemError(std::move(errs));
  return p;
}

std::int64_t delta_of(std::int64_t w, std::int64_t m,
                      std::optional<std::int64_t> cap) {
  if (w < 1 || w > m)
    throw std::invalid_argument("delta_of: width must be in [1, bus width]");
  if (cap && *cap < 1)
    throw std::invalid_argument("delta_of: cap must be >= 1");
  std::int64_t k = m / w;
  if (cap) k = std::min(k, *cap);
  return k * w;
}

std::int64_t elements_per_cycle(const ArraySpec& a, std::int64_t m) {
  return delta_of(a.width, m, a.delta_cap) / a.width;
}

std::int64_t total_processing_time(const Problem& p) {
  return std::accumulate(
      p.arrays.begin(), p.arrays.end(), std::int64_t{0},
      [](std::int64_t s, const ArraySpec& a) { return s + a.width * a.depth; });
}

std::vector<DerivedTask> derive_tasks(const Problem& p) {
  std::vector<DerivedTask> tasks;
  tasks.reserve(p.arrays.size());
  std::int64_t d_max = 0;
  for (const auto& a : p.arrays) d_max = std::max(d_max, a.due_date);
  for (std::size_t j = 0; j < p.arrays.size(); ++j) {
    const auto& a = p.arrays[j];
    DerivedTask t;
    t.index = j;
    t.width = a.width;
    t.processing_time = a.width * a.depth;
    t.delta = delta_of(a.width, p.bus_width, a.delta_cap);
    t.release = d_max - a.due_date;
    t.remaining_elements = a.depth;
    tasks.push_back(t);
  }
  return tasks;
}

}  // namespace iris
